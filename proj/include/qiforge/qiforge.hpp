#pragma once

// Umbrella header: word-metric models of amenable (and contrast non-amenable)
// groups, Folner profiles, uniformly finite 0-chain statistics, quasi-isometry
// audits, and bounded-displacement bijection tests on finite windows.

#include "qiforge/ball.hpp"
#include "qiforge/bs_model.hpp"
#include "qiforge/errors.hpp"
#include "qiforge/experiment.hpp"
#include "qiforge/folner.hpp"
#include "qiforge/groups.hpp"
#include "qiforge/io.hpp"
#include "qiforge/matching.hpp"
#include "qiforge/qi_maps.hpp"
#include "qiforge/rational.hpp"
#include "qiforge/specs.hpp"
#include "qiforge/uf_chain.hpp"
