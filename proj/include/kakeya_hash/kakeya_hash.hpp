#pragma once

// Core library. The harness headers (kakeya_hash/harness/*) additionally need nlohmann/json.

#include "kakeya_hash/balance/balance.hpp"
#include "kakeya_hash/core/error.hpp"
#include "kakeya_hash/core/rational.hpp"
#include "kakeya_hash/core/rng.hpp"
#include "kakeya_hash/core/surd.hpp"
#include "kakeya_hash/furstenberg/furstenberg.hpp"
#include "kakeya_hash/hashcore/embed.hpp"
#include "kakeya_hash/hashcore/histogram.hpp"
#include "kakeya_hash/hashcore/params.hpp"
#include "kakeya_hash/hashcore/point_set.hpp"
#include "kakeya_hash/hashcore/two_stage.hpp"
#include "kakeya_hash/linalg/field.hpp"
#include "kakeya_hash/linalg/matrix.hpp"
#include "kakeya_hash/linalg/sampling.hpp"
#include "kakeya_hash/linalg/subspace.hpp"
#include "kakeya_hash/linalg/vector.hpp"
#include "kakeya_hash/polymethod/eval_matrix.hpp"
#include "kakeya_hash/polymethod/hasse.hpp"
#include "kakeya_hash/polymethod/multipoly.hpp"
