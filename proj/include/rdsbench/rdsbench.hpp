#pragma once

// Umbrella header for the rdsbench library.

#include "rdsbench/answer.hpp"
#include "rdsbench/assemble.hpp"
#include "rdsbench/eval.hpp"
#include "rdsbench/hash.hpp"
#include "rdsbench/manifest.hpp"
#include "rdsbench/mask.hpp"
#include "rdsbench/metrics.hpp"
#include "rdsbench/png_io.hpp"
#include "rdsbench/predictors.hpp"
#include "rdsbench/report.hpp"
#include "rdsbench/rle.hpp"
#include "rdsbench/rng.hpp"
#include "rdsbench/synthetic.hpp"
#include "rdsbench/templates.hpp"
#include "rdsbench/types.hpp"
#include "rdsbench/version.hpp"
