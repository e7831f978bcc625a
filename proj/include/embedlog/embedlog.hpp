#pragma once

#include "embedlog/embed.hpp"
#include "embedlog/error.hpp"
#include "embedlog/expm.hpp"
#include "embedlog/families.hpp"
#include "embedlog/io.hpp"
#include "embedlog/matrix.hpp"
#include "embedlog/scalar.hpp"
#include "embedlog/spectrum.hpp"
#include "embedlog/ssm.hpp"
#include "embedlog/tolerances.hpp"
