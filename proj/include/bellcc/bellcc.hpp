#pragma once

#include "bellcc/beacon.hpp"
#include "bellcc/classical.hpp"
#include "bellcc/core.hpp"
#include "bellcc/io.hpp"
#include "bellcc/linalg.hpp"
#include "bellcc/optimizer.hpp"
#include "bellcc/protocol.hpp"
#include "bellcc/quantum.hpp"
#include "bellcc/random.hpp"
#include "bellcc/scenario.hpp"
