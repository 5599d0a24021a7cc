#pragma once

#include <bratteli/catalog.hpp>
#include <bratteli/cocycle.hpp>
#include <bratteli/contraction.hpp>
#include <bratteli/diagram.hpp>
#include <bratteli/ergodicity.hpp>
#include <bratteli/errors.hpp>
#include <bratteli/measures.hpp>
#include <bratteli/sft.hpp>
#include <bratteli/spectral.hpp>
