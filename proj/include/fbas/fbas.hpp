#pragma once

#include "fbas/analysis.hpp"
#include "fbas/compiled.hpp"
#include "fbas/core.hpp"
#include "fbas/family.hpp"
#include "fbas/io.hpp"
#include "fbas/node_set.hpp"
#include "fbas/oracle.hpp"
#include "fbas/pipeline.hpp"
#include "fbas/preprocess.hpp"
#include "fbas/qsc.hpp"
#include "fbas/symmetric.hpp"
