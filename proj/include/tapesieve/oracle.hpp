#pragma once

#include <cstdint>
#include <vector>

// Unmetered random-access reference implementations. These are ground truth
// for tests and verification runs and deliberately share no code with the
// tape modules.
namespace tapesieve::oracle {

// Entry k is 1 iff k is prime.
inline std::vector<std::uint8_t> eratosthenes(std::uint64_t n) {
  std::vector<std::uint8_t> is_prime(n + 1, 1);
  is_prime[0] = 0;
  if (n >= 1) is_prime[1] = 0;
  for (std::uint64_t i = 2; i * i <= n; ++i)
    if (is_prime[i])
      for (std::uint64_t j = i * i; j <= n; j += i) is_prime[j] = 0;
  return is_prime;
}

inline std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  auto bits = eratosthenes(n);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t k = 2; k <= n; ++k)
    if (bits[k]) primes.push_back(k);
  return primes;
}

// Least-prime-factor table via the linear sieve: entry m holds the smallest
// prime dividing m, m itself when m is prime, 0 below 2.
inline std::vector<std::uint64_t> lpf_table(std::uint64_t n) {
  std::vector<std::uint64_t> lpf(n + 1, 0);
  std::vector<std::uint64_t> primes;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (lpf[i] == 0) {
      lpf[i] = i;
      primes.push_back(i);
    }
    for (std::uint64_t p : primes) {
      if (p > lpf[i] || i * p > n) break;
      lpf[i * p] = p;
    }
  }
  return lpf;
}

inline bool trial_division_is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t d = 2; d * d <= m; ++d)
    if (m % d == 0) return false;
  return true;
}

}  // namespace tapesieve::oracle
