#ifndef EWENSPOLY_EWENSPOLY_HPP
#define EWENSPOLY_EWENSPOLY_HPP

#include "ewenspoly/charpoly.hpp"
#include "ewenspoly/limit_field.hpp"
#include "ewenspoly/measure.hpp"
#include "ewenspoly/numeric.hpp"
#include "ewenspoly/parse.hpp"
#include "ewenspoly/portrait.hpp"
#include "ewenspoly/rng.hpp"
#include "ewenspoly/series.hpp"
#include "ewenspoly/stats.hpp"
#include "ewenspoly/weights.hpp"

#endif
