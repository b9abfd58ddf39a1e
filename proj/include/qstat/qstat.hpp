#pragma once

#include "qstat/algebra.hpp"
#include "qstat/distributions.hpp"
#include "qstat/errors.hpp"
#include "qstat/family.hpp"
#include "qstat/oracle.hpp"
#include "qstat/power_series.hpp"
#include "qstat/qcore.hpp"
#include "qstat/qfunctions.hpp"
#include "qstat/qparam.hpp"
#include "qstat/report.hpp"
#include "qstat/root_finding.hpp"
#include "qstat/taylor.hpp"
#include "qstat/thermo.hpp"
#include "qstat/verification.hpp"
