#pragma once

#include "relpress/sft.hpp"

namespace relpress {

/// The five-symbol SFT with a 2-to-1 tail structure over the golden mean
/// shift: symbols 1..5, edges 1->2, 1->3, 2->1, 2->2, 3->4, 3->5, 4->3,
/// 5->3, 4->1; code 1 -> 1 and 2,3,4,5 -> 2. The image presentation has
/// edges 1->2, 2->1, 2->2.
FactorCode example1_code();

/// Run lengths of 2s between consecutive 1s: a_k = 2^k + 1.
long example1_a(int k);

/// Position of the (k+1)-th 1 in the distinguished point:
/// n_k = 2^{k+1} + 2k - 2.
long example1_n(int k);

/// y_[0, n_K]: the word 1 2^{a_1} 1 2^{a_2} 1 ... 2^{a_K} 1.
Word example1_center(int K);

/// The distinguished image point, truncated after the (K+1)-th 1 and
/// continued with the periodic tail 2^inf on both sides. Its windows
/// y_[0, n) agree with the true (aperiodic) point for every n <= n_K, and so
/// do the D_n sets: the last center symbol is a 1, which pins the fiber
/// there exactly as in the untruncated point.
EventuallyPeriodicPoint example1_point(const FactorCode& code, int K);

}  // namespace relpress
