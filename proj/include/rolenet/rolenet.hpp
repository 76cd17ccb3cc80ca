#pragma once

#include "rolenet/agglomerative.hpp"
#include "rolenet/csv.hpp"
#include "rolenet/egofeat.hpp"
#include "rolenet/graph.hpp"
#include "rolenet/objective.hpp"
#include "rolenet/parallel.hpp"
#include "rolenet/pipeline.hpp"
#include "rolenet/profile.hpp"
#include "rolenet/proxsim.hpp"
#include "rolenet/spectral.hpp"
#include "rolenet/synth.hpp"
#include "rolenet/types.hpp"
