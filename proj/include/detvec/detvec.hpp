#ifndef DETVEC_DETVEC_HPP
#define DETVEC_DETVEC_HPP

// Everything except the scenario front end (detvec/cli.hpp, which needs yaml-cpp).

#include "detvec/autcheck.hpp"
#include "detvec/constructions.hpp"
#include "detvec/errors.hpp"
#include "detvec/expr.hpp"
#include "detvec/fields.hpp"
#include "detvec/flows.hpp"
#include "detvec/lie.hpp"
#include "detvec/linalg.hpp"
#include "detvec/parser.hpp"
#include "detvec/random.hpp"
#include "detvec/relations.hpp"

#endif  // DETVEC_DETVEC_HPP
