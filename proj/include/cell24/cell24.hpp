#pragma once

#include "cell24/constructions.hpp"
#include "cell24/designs.hpp"
#include "cell24/dynamics.hpp"
#include "cell24/energy.hpp"
#include "cell24/exact/polynomial.hpp"
#include "cell24/exact/proposition.hpp"
#include "cell24/exact/q7.hpp"
#include "cell24/exact/sturm.hpp"
#include "cell24/geometry.hpp"
#include "cell24/io.hpp"
#include "cell24/linalg.hpp"
#include "cell24/parallel.hpp"
#include "cell24/potentials.hpp"
