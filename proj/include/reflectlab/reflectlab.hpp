#pragma once

#include "reflectlab/core/errors.hpp"
#include "reflectlab/gas.hpp"
#include "reflectlab/linsolve.hpp"
#include "reflectlab/mesh.hpp"
#include "reflectlab/pencil.hpp"
#include "reflectlab/perturb.hpp"
#include "reflectlab/polar.hpp"
#include "reflectlab/reflection.hpp"
#include "reflectlab/shock.hpp"
#include "reflectlab/version.hpp"
