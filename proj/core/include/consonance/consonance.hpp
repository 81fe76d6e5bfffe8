#pragma once

#include "consonance/bsa.hpp"
#include "consonance/contour.hpp"
#include "consonance/credal.hpp"
#include "consonance/error.hpp"
#include "consonance/harness.hpp"
#include "consonance/outcome.hpp"
#include "consonance/possibility.hpp"
#include "consonance/rational.hpp"
#include "consonance/region.hpp"
#include "consonance/transducer.hpp"
