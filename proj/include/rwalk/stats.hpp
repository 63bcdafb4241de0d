#ifndef RWALK_STATS_HPP
#define RWALK_STATS_HPP

#include "rwalk/stats/common.hpp"
#include "rwalk/stats/ecdf.hpp"
#include "rwalk/stats/location.hpp"
#include "rwalk/stats/normality.hpp"
#include "rwalk/stats/regression.hpp"
#include "rwalk/stats/runs.hpp"

#endif  // RWALK_STATS_HPP
