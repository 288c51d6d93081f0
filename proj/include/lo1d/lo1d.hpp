#pragma once

#include "lo1d/bounds.hpp"
#include "lo1d/commands.hpp"
#include "lo1d/config.hpp"
#include "lo1d/energies.hpp"
#include "lo1d/errors.hpp"
#include "lo1d/explore.hpp"
#include "lo1d/format.hpp"
#include "lo1d/gaussian_mixture.hpp"
#include "lo1d/hubbard.hpp"
#include "lo1d/numerics.hpp"
#include "lo1d/potentials.hpp"
#include "lo1d/report.hpp"
#include "lo1d/states.hpp"
