#pragma once

#include "perispec/canonical.hpp"
#include "perispec/conjugation_probe.hpp"
#include "perispec/elimination.hpp"
#include "perispec/error.hpp"
#include "perispec/jordan.hpp"
#include "perispec/json_io.hpp"
#include "perispec/matrix.hpp"
#include "perispec/orthogonality.hpp"
#include "perispec/preserver.hpp"
#include "perispec/random.hpp"
#include "perispec/rank_one_sandwich.hpp"
#include "perispec/schur.hpp"
#include "perispec/spectrum.hpp"
#include "perispec/tomography.hpp"
#include "perispec/witness.hpp"
