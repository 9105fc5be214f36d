#pragma once

#include "sqss/core/bits.hpp"
#include "sqss/core/errors.hpp"
#include "sqss/core/ghz.hpp"
#include "sqss/core/matrix.hpp"
#include "sqss/core/rng.hpp"
#include "sqss/core/state_pool.hpp"

#include "sqss/protocol/dealer.hpp"
#include "sqss/protocol/party.hpp"
#include "sqss/protocol/session.hpp"
#include "sqss/protocol/transcript.hpp"
#include "sqss/protocol/types.hpp"

#include "sqss/adversary/attack_model.hpp"
#include "sqss/adversary/collusion.hpp"
#include "sqss/adversary/inference.hpp"
#include "sqss/adversary/taps.hpp"

#include "sqss/analysis/detection.hpp"
#include "sqss/analysis/efficiency.hpp"
#include "sqss/analysis/enumerate.hpp"
#include "sqss/analysis/exact.hpp"
#include "sqss/analysis/report.hpp"
#include "sqss/analysis/verify.hpp"

#include "sqss/io/attack_spec.hpp"
#include "sqss/io/config.hpp"
