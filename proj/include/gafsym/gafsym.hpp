#ifndef GAFSYM_GAFSYM_HPP
#define GAFSYM_GAFSYM_HPP

#include <gafsym/bounds.hpp>
#include <gafsym/chase.hpp>
#include <gafsym/errors.hpp>
#include <gafsym/gaf.hpp>
#include <gafsym/grunsky.hpp>
#include <gafsym/matrix.hpp>
#include <gafsym/parallel.hpp>
#include <gafsym/report.hpp>
#include <gafsym/rng.hpp>
#include <gafsym/series.hpp>
#include <gafsym/special.hpp>
#include <gafsym/suites.hpp>
#include <gafsym/symbols.hpp>

#endif
