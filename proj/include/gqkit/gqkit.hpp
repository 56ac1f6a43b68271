#pragma once

#include "gqkit/cli.hpp"
#include "gqkit/conllu.hpp"
#include "gqkit/corpus.hpp"
#include "gqkit/detector.hpp"
#include "gqkit/error.hpp"
#include "gqkit/formula.hpp"
#include "gqkit/formula_json.hpp"
#include "gqkit/generator.hpp"
#include "gqkit/model.hpp"
#include "gqkit/numeral.hpp"
#include "gqkit/oracle.hpp"
#include "gqkit/patterns.hpp"
#include "gqkit/quantifier.hpp"
#include "gqkit/region.hpp"
#include "gqkit/stats.hpp"
