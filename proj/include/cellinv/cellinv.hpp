#pragma once

#include "cellinv/analysis.hpp"
#include "cellinv/automaton.hpp"
#include "cellinv/bounded.hpp"
#include "cellinv/catable.hpp"
#include "cellinv/coding.hpp"
#include "cellinv/configuration.hpp"
#include "cellinv/error.hpp"
#include "cellinv/formula.hpp"
#include "cellinv/inverse.hpp"
#include "cellinv/state.hpp"
#include "cellinv/tableau.hpp"
#include "cellinv/translate.hpp"
