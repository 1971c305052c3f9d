#pragma once

#include "f2ext/error.hpp"
#include "f2ext/f2core.hpp"
#include "f2ext/field.hpp"
#include "f2ext/polymap.hpp"
#include "f2ext/rational.hpp"
#include "f2ext/sources.hpp"
#include "f2ext/hashfam.hpp"
#include "f2ext/search.hpp"
#include "f2ext/reduction.hpp"
#include "f2ext/impossibility.hpp"
#include "f2ext/io.hpp"
