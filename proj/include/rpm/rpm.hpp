#pragma once

#include "rpm/error.hpp"
#include "rpm/rational.hpp"
#include "rpm/qfield.hpp"
#include "rpm/polynomial.hpp"
#include "rpm/pdp.hpp"
#include "rpm/state_space.hpp"
#include "rpm/properties.hpp"
#include "rpm/kmc.hpp"
#include "rpm/stationary.hpp"
#include "rpm/scgf.hpp"
#include "rpm/report.hpp"
#include "rpm/tq_fsz.hpp"
#include "rpm/tq_derivatives.hpp"
#include "rpm/bethe.hpp"
#include "rpm/xxz.hpp"
#include "rpm/io.hpp"
#include "rpm/verify.hpp"
