#pragma once

#include "sdeclass/baselines.hpp"
#include "sdeclass/bench.hpp"
#include "sdeclass/dataset_io.hpp"
#include "sdeclass/diffusion_sim.hpp"
#include "sdeclass/erm_objective.hpp"
#include "sdeclass/erm_train.hpp"
#include "sdeclass/errors.hpp"
#include "sdeclass/model_select.hpp"
#include "sdeclass/optimizer.hpp"
#include "sdeclass/rng.hpp"
#include "sdeclass/score_io.hpp"
#include "sdeclass/scores.hpp"
#include "sdeclass/splines.hpp"
