#pragma once

#include "trifee/arb_agent.hpp"
#include "trifee/fee_schedule.hpp"
#include "trifee/metrics.hpp"
#include "trifee/noise_probe.hpp"
#include "trifee/pool.hpp"
#include "trifee/price_process.hpp"
#include "trifee/sweep_engine.hpp"
#include "trifee/trade.hpp"
