#ifndef GGT_GGT_HPP
#define GGT_GGT_HPP

#include "ggt/config.hpp"
#include "ggt/correspondence.hpp"
#include "ggt/evaluation.hpp"
#include "ggt/geometric_hypergraph.hpp"
#include "ggt/geometry.hpp"
#include "ggt/mode_parsing.hpp"
#include "ggt/mode_seeking.hpp"
#include "ggt/model_update.hpp"
#include "ggt/part_model.hpp"
#include "ggt/plot.hpp"
#include "ggt/sequence_io.hpp"
#include "ggt/state_estimation.hpp"
#include "ggt/synth.hpp"
#include "ggt/tracker.hpp"

#endif  // GGT_GGT_HPP
