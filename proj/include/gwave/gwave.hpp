#ifndef GWAVE_GWAVE_HPP
#define GWAVE_GWAVE_HPP

#include "gwave/error.hpp"
#include "gwave/trig_poly.hpp"
#include "gwave/random.hpp"
#include "gwave/correspondence.hpp"
#include "gwave/cuntz.hpp"
#include "gwave/transfer.hpp"
#include "gwave/word_algebra.hpp"
#include "gwave/cascade.hpp"
#include "gwave/ifs.hpp"
#include "gwave/io.hpp"

#endif // GWAVE_GWAVE_HPP
