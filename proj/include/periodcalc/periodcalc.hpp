#pragma once

// Umbrella header for the period calculus engine.

#include "characters.hpp"
#include "derivations.hpp"
#include "dirichlet.hpp"
#include "fields.hpp"
#include "hodge.hpp"
#include "induction.hpp"
#include "period_algebra.hpp"
#include "rational.hpp"
#include "session.hpp"
