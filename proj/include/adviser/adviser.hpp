#pragma once

// Core library. The session service lives in adviser/service.hpp and its
// HTTP binding in adviser/http.hpp; both pull in vendored headers.

#include "adviser/arena.hpp"
#include "adviser/dot.hpp"
#include "adviser/error.hpp"
#include "adviser/fixtures.hpp"
#include "adviser/guided.hpp"
#include "adviser/io.hpp"
#include "adviser/manufacturing.hpp"
#include "adviser/meanpayoff.hpp"
#include "adviser/rational.hpp"
#include "adviser/safety.hpp"
#include "adviser/search.hpp"
