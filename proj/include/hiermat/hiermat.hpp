#pragma once

// Umbrella header: tensor-product construction of block-hierarchical and
// block-rectangular operators, their closed-form spectra, dense brute-force
// verification, and the rotating-disc error model.

#include "hiermat/dense.hpp"
#include "hiermat/encoding.hpp"
#include "hiermat/errors.hpp"
#include "hiermat/noise.hpp"
#include "hiermat/oracle.hpp"
#include "hiermat/params.hpp"
#include "hiermat/partitions.hpp"
#include "hiermat/rng.hpp"
#include "hiermat/serialize.hpp"
#include "hiermat/spectra.hpp"
#include "hiermat/tensor_ops.hpp"
