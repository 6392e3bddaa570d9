#pragma once

#include "vnmatch/assignment.hpp"
#include "vnmatch/config.hpp"
#include "vnmatch/experiment.hpp"
#include "vnmatch/graph.hpp"
#include "vnmatch/nomination.hpp"
#include "vnmatch/parallel.hpp"
#include "vnmatch/random_models.hpp"
#include "vnmatch/rng.hpp"
#include "vnmatch/serialize.hpp"
#include "vnmatch/sgm.hpp"
#include "vnmatch/soft_sgm.hpp"
