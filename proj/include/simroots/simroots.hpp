#ifndef SIMROOTS_SIMROOTS_HPP
#define SIMROOTS_SIMROOTS_HPP

#include "common.hpp"
#include "driver.hpp"
#include "iteration.hpp"
#include "polynomial.hpp"
#include "symmetric.hpp"

#endif // SIMROOTS_SIMROOTS_HPP
