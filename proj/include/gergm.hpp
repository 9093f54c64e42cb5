#ifndef GERGM_HPP
#define GERGM_HPP

#include "gergm/error.hpp"
#include "gergm/graph.hpp"
#include "gergm/attributes.hpp"
#include "gergm/catalog.hpp"
#include "gergm/census.hpp"
#include "gergm/terms.hpp"
#include "gergm/model.hpp"
#include "gergm/change.hpp"
#include "gergm/sampler.hpp"
#include "gergm/inference.hpp"
#include "gergm/gof.hpp"

#endif  // GERGM_HPP
