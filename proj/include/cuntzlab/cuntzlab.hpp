#ifndef CUNTZLAB_CUNTZLAB_HPP
#define CUNTZLAB_CUNTZLAB_HPP

// Everything at once. Individual headers can be included on their own.

#include "error.hpp"
#include "rational.hpp"
#include "permutation.hpp"
#include "linear_system.hpp"
#include "exact_matrix.hpp"
#include "group.hpp"
#include "representation.hpp"
#include "identification.hpp"
#include "spectral.hpp"
#include "sequence.hpp"
#include "stages.hpp"
#include "crossed_product.hpp"
#include "comparison.hpp"
#include "report.hpp"
#include "cli.hpp"

#endif  // CUNTZLAB_CUNTZLAB_HPP
