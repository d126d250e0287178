#pragma once

#include "qmsd/abb_geometry.hpp"
#include "qmsd/code_search.hpp"
#include "qmsd/distillation.hpp"
#include "qmsd/errors.hpp"
#include "qmsd/gf_arith.hpp"
#include "qmsd/qudit_ops.hpp"
#include "qmsd/stab_codes.hpp"
#include "qmsd/wigner.hpp"
