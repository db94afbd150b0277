#pragma once

#include "catalog.hpp"
#include "constraints.hpp"
#include "csv.hpp"
#include "extremal.hpp"
#include "grid.hpp"
#include "horizonlab.hpp"
#include "problem.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "spaces.hpp"
#include "sufficiency.hpp"
#include "weights.hpp"
