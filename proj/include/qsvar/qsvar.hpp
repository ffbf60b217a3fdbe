#ifndef QSVAR_QSVAR_HPP
#define QSVAR_QSVAR_HPP

#include "qsvar/errors.hpp"
#include "qsvar/exact_dist.hpp"
#include "qsvar/harmonic.hpp"
#include "qsvar/io.hpp"
#include "qsvar/moments.hpp"
#include "qsvar/rational.hpp"
#include "qsvar/simulator.hpp"

#endif  // QSVAR_QSVAR_HPP
