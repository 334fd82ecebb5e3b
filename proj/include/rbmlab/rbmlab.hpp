#pragma once

#include "rbmlab/band_linalg.hpp"
#include "rbmlab/ensembles.hpp"
#include "rbmlab/estimators.hpp"
#include "rbmlab/limits.hpp"
#include "rbmlab/transfer_spectra.hpp"
