#pragma once

#include "ffdist/counting.hpp"
#include "ffdist/energy.hpp"
#include "ffdist/error.hpp"
#include "ffdist/field.hpp"
#include "ffdist/incidence.hpp"
#include "ffdist/io.hpp"
#include "ffdist/line.hpp"
#include "ffdist/point_set.hpp"
#include "ffdist/proof_chain.hpp"
#include "ffdist/report.hpp"
#include "ffdist/sweep.hpp"
