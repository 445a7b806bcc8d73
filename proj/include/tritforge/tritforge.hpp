#pragma once

#include "tritforge/catalog.hpp"
#include "tritforge/circuit.hpp"
#include "tritforge/config.hpp"
#include "tritforge/entry.hpp"
#include "tritforge/errors.hpp"
#include "tritforge/gate.hpp"
#include "tritforge/linalg.hpp"
#include "tritforge/qec.hpp"
#include "tritforge/register.hpp"
#include "tritforge/rng.hpp"
#include "tritforge/state.hpp"
#include "tritforge/timing.hpp"
#include "tritforge/verifier.hpp"
