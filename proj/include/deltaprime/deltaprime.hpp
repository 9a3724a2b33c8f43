#pragma once

#include "deltaprime/couplings.hpp"
#include "deltaprime/decoupled.hpp"
#include "deltaprime/errors.hpp"
#include "deltaprime/heat.hpp"
#include "deltaprime/kurasov.hpp"
#include "deltaprime/spectra.hpp"
#include "deltaprime/transfer.hpp"
#include "deltaprime/units.hpp"
