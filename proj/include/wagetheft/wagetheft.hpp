#pragma once

#include "wagetheft/characterization.hpp"
#include "wagetheft/experiments.hpp"
#include "wagetheft/io.hpp"
#include "wagetheft/model.hpp"
#include "wagetheft/numeric.hpp"
#include "wagetheft/oracle.hpp"
#include "wagetheft/repeated.hpp"
#include "wagetheft/report.hpp"
#include "wagetheft/solver.hpp"
