#ifndef RWALK_RWALK_HPP
#define RWALK_RWALK_HPP

#include "rwalk/date.hpp"
#include "rwalk/demo.hpp"
#include "rwalk/error.hpp"
#include "rwalk/fractal.hpp"
#include "rwalk/ingest.hpp"
#include "rwalk/io/csv.hpp"
#include "rwalk/io/json.hpp"
#include "rwalk/noise.hpp"
#include "rwalk/pipeline.hpp"
#include "rwalk/rng.hpp"
#include "rwalk/series.hpp"
#include "rwalk/spectral.hpp"
#include "rwalk/stats.hpp"
#include "rwalk/version.hpp"

#endif  // RWALK_RWALK_HPP
