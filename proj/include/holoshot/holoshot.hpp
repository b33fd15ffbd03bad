// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "holoshot/error.hpp"
#include "holoshot/io.hpp"
#include "holoshot/lattice.hpp"
#include "holoshot/measure.hpp"
#include "holoshot/point.hpp"
#include "holoshot/reconstruct.hpp"
#include "holoshot/recover.hpp"
#include "holoshot/refinable.hpp"
#include "holoshot/targets.hpp"
#include "holoshot/waves.hpp"
