#pragma once

#include "bww/ast.hpp"
#include "bww/diagnostic.hpp"
#include "bww/error.hpp"
#include "bww/frontend.hpp"
#include "bww/ids.hpp"
#include "bww/kernel.hpp"
#include "bww/lexer.hpp"
#include "bww/model.hpp"
#include "bww/parser.hpp"
#include "bww/printer.hpp"
#include "bww/query.hpp"
#include "bww/resolver.hpp"
#include "bww/semantics.hpp"
#include "bww/serialization.hpp"
#include "bww/validator.hpp"
