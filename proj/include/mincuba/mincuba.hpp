#pragma once
#include "cubature2d.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "interp2d.hpp"
#include "io.hpp"
#include "jacobi1d.hpp"
#include "oracle.hpp"
#include "orthopoly2d.hpp"
#include "summation.hpp"
#include "version.hpp"
#include "weights.hpp"
