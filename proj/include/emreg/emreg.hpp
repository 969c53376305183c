#pragma once

#include "emreg/calculus.hpp"
#include "emreg/dos.hpp"
#include "emreg/em.hpp"
#include "emreg/error.hpp"
#include "emreg/extractor.hpp"
#include "emreg/jet.hpp"
#include "emreg/real.hpp"
#include "emreg/regularize.hpp"
#include "emreg/special.hpp"
#include "emreg/spectra.hpp"
#include "emreg/summands.hpp"
