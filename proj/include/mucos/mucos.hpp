#pragma once
// Umbrella header.

#include "mucos/bench.hpp"
#include "mucos/config.hpp"
#include "mucos/context.hpp"
#include "mucos/density.hpp"
#include "mucos/encoder.hpp"
#include "mucos/errors.hpp"
#include "mucos/evaluator.hpp"
#include "mucos/kg.hpp"
#include "mucos/optim.hpp"
#include "mucos/pipeline.hpp"
#include "mucos/report.hpp"
#include "mucos/sequence.hpp"
#include "mucos/trainer.hpp"
