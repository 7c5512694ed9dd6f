#ifndef CHEBMG_CHEBMG_HPP
#define CHEBMG_CHEBMG_HPP

#include "analysis.hpp"
#include "beta_table.hpp"
#include "cholesky.hpp"
#include "core.hpp"
#include "domain.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "krylov.hpp"
#include "lanczos.hpp"
#include "multigrid.hpp"
#include "operators.hpp"
#include "problem.hpp"
#include "smoothers.hpp"
#include "transfer.hpp"

#endif
