#pragma once

#include "qauth/linalg/density.hpp"
#include "qauth/linalg/eig.hpp"
#include "qauth/linalg/gates.hpp"
#include "qauth/linalg/matrix.hpp"
#include "qauth/linalg/partial_trace.hpp"
#include "qauth/linalg/random.hpp"
