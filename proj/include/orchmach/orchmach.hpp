#pragma once

#include "orchmach/analysis.hpp"
#include "orchmach/breed.hpp"
#include "orchmach/catalog.hpp"
#include "orchmach/codec.hpp"
#include "orchmach/engine.hpp"
#include "orchmach/enumerate.hpp"
#include "orchmach/errors.hpp"
#include "orchmach/harness.hpp"
#include "orchmach/machine.hpp"
#include "orchmach/ndtm.hpp"
#include "orchmach/policy.hpp"
#include "orchmach/reference.hpp"
#include "orchmach/rule_text.hpp"
#include "orchmach/symbols.hpp"
#include "orchmach/tape.hpp"
#include "orchmach/trace.hpp"
