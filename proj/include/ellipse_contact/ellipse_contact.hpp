#pragma once

#include "core_types.hpp"
#include "transform.hpp"
#include "quartic.hpp"
#include "contact.hpp"
#include "analysis.hpp"
#include "mcsim.hpp"
