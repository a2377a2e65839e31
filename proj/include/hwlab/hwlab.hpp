#pragma once

#include "hwlab/error.hpp"
#include "hwlab/grid.hpp"
#include "hwlab/fft.hpp"
#include "hwlab/field.hpp"
#include "hwlab/symbol.hpp"
#include "hwlab/fractional.hpp"
#include "hwlab/functionals.hpp"
#include "hwlab/dilation.hpp"
#include "hwlab/orbit.hpp"
#include "hwlab/solitary.hpp"
#include "hwlab/linearization.hpp"
#include "hwlab/evolution.hpp"
#include "hwlab/random_fields.hpp"
