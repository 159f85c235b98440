#pragma once

#include "rdsym/expr/expr.hpp"
#include "rdsym/expr/construct.hpp"
#include "rdsym/expr/traverse.hpp"
#include "rdsym/expr/diff.hpp"
#include "rdsym/expr/simplify.hpp"
#include "rdsym/expr/subst.hpp"
#include "rdsym/expr/eval.hpp"
#include "rdsym/expr/render.hpp"
#include "rdsym/expr/parse.hpp"
