#include "relpress/example1.hpp"

#include <stdexcept>

namespace relpress {

FactorCode example1_code() {
  Sft X = Sft::make({"1", "2", "3", "4", "5"},
                    {{"1", "2"},
                     {"1", "3"},
                     {"2", "1"},
                     {"2", "2"},
                     {"3", "4"},
                     {"3", "5"},
                     {"4", "3"},
                     {"5", "3"},
                     {"4", "1"}});
  return FactorCode(std::move(X),
                    {{"1", "1"}, {"2", "2"}, {"3", "2"}, {"4", "2"}, {"5", "2"}});
}

long example1_a(int k) {
  if (k < 1 || k > 61) throw std::invalid_argument("example1_a: k out of range");
  return (1L << k) + 1;
}

long example1_n(int k) {
  if (k < 1 || k > 60) throw std::invalid_argument("example1_n: k out of range");
  return (1L << (k + 1)) + 2L * k - 2;
}

Word example1_center(int K) {
  long n = example1_n(K);
  std::vector<Symbol> syms;
  syms.reserve(static_cast<std::size_t>(n) + 1);
  syms.push_back(0);  // image symbol "1"
  for (int k = 1; k <= K; ++k) {
    for (long j = 0; j < example1_a(k); ++j) syms.push_back(1);  // image symbol "2"
    syms.push_back(0);
  }
  if (static_cast<long>(syms.size()) != n + 1)
    throw std::logic_error("example1_center: length mismatch");
  return Word(std::move(syms));
}

EventuallyPeriodicPoint example1_point(const FactorCode& code, int K) {
  Word two(std::vector<Symbol>{1});
  return EventuallyPeriodicPoint(code.image(), two, example1_center(K), two, 0);
}

}  // namespace relpress
