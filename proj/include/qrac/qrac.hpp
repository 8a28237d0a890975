#pragma once

// Core library. JSON/CSV serialization lives separately in qrac/io.hpp.

#include "qrac/bounds.hpp"
#include "qrac/classical_search.hpp"
#include "qrac/compatibility.hpp"
#include "qrac/config.hpp"
#include "qrac/eigen.hpp"
#include "qrac/error.hpp"
#include "qrac/matrix.hpp"
#include "qrac/operators.hpp"
#include "qrac/quantum.hpp"
#include "qrac/qubit_triple.hpp"
#include "qrac/rational.hpp"
#include "qrac/scenario.hpp"
#include "qrac/seesaw.hpp"
#include "qrac/witness.hpp"
