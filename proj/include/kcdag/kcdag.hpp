#pragma once

#include "kcdag/bound.hpp"
#include "kcdag/compiler.hpp"
#include "kcdag/convert.hpp"
#include "kcdag/decompose.hpp"
#include "kcdag/error.hpp"
#include "kcdag/formula.hpp"
#include "kcdag/ops.hpp"
#include "kcdag/store.hpp"
#include "kcdag/validate.hpp"
