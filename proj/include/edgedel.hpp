#pragma once

#include "edgedel/error.hpp"
#include "edgedel/factor.hpp"
#include "edgedel/model.hpp"
#include "edgedel/ordering.hpp"
#include "edgedel/engine.hpp"
#include "edgedel/deletion.hpp"
#include "edgedel/divergence.hpp"
#include "edgedel/tags.hpp"
#include "edgedel/parametrization.hpp"
#include "edgedel/map.hpp"
#include "edgedel/netio.hpp"
#include "edgedel/synthetic.hpp"
#include "edgedel/experiment.hpp"
