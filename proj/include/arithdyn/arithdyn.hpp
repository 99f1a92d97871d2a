/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include "error.hpp"
#include "exact_arith.hpp"
#include "poly.hpp"
#include "linalg.hpp"
#include "projective.hpp"
#include "elliptic.hpp"
#include "heights.hpp"
#include "orbits.hpp"
#include "degrees.hpp"
#include "abelian.hpp"
#include "parse.hpp"
#include "report.hpp"
