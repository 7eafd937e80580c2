#pragma once

#include <cstdint>
#include <random>

namespace kwopt {

// The four stationary observation-noise models used by the benchmark suite.
enum class NoiseVariant { iid_normal, iid_uniform01, iid_beta22, ar1 };

struct NoiseModel {
  NoiseVariant variant = NoiseVariant::iid_normal;
  double mean = 0.0;           // iid_normal only
  double sd = 1.0;             // iid_normal only
  double kappa = 0.0;          // ar1 only, |kappa| < 1
  double innovation_sd = 1.0;  // ar1 only

  static NoiseModel normal(double mean = 0.0, double sd = 1.0);
  static NoiseModel uniform01();
  static NoiseModel beta22();
  static NoiseModel ar1_process(double kappa, double innovation_sd = 1.0);
};

// How the two observations of a central difference are coupled:
//   identical   -- one draw shared by both sides (common random numbers)
//   independent -- two fresh draws (i.i.d. models only)
//   consecutive -- two successive values of the underlying process
enum class PairingMode { independent, identical, consecutive };

struct NoisePair {
  double x_plus = 0.0;
  double x_minus = 0.0;
};

struct Moments {
  double mean = 0.0;
  double second_moment = 0.0;
};

// Exact stationary mean and second moment of a model.
Moments stationary_moments(const NoiseModel& m);

// Seed for the stream of path `path_index` under a given master seed: the
// (path_index + 1)-th output of a SplitMix64 generator seeded with the master
// seed.  Documented so that results can be reproduced outside this library.
std::uint64_t derive_path_seed(std::uint64_t master_seed, std::uint64_t path_index);

// A seeded stream of stationary observations with pairing support.  The AR(1)
// state is initialised from its stationary law N(0, sd^2/(1-kappa^2)), so the
// emitted sequence is strictly stationary from the first value on.
//
// All randomness comes from a std::mt19937_64 engine expanded from the 64-bit
// seed via std::seed_seq over four SplitMix64 outputs.  Uniform variates take
// the top 53 bits of an engine draw; normal variates use the Marsaglia polar
// method (with the spare value cached); Beta(2,2) variates are the median of
// three uniforms.  Given one seed and one build, the sequence is bit-stable.
class NoiseStream {
 public:
  NoiseStream(const NoiseModel& model, std::uint64_t seed);

  // Next value of the stationary process.
  double next_value();

  // Next coupled pair.  Throws std::invalid_argument for the ar1 model in
  // independent mode (independent restarts of a dependent process are not
  // meaningful here).
  NoisePair next_pair(PairingMode mode);

  const NoiseModel& model() const { return model_; }

 private:
  double uniform();
  double normal();

  NoiseModel model_;
  std::mt19937_64 engine_;
  double ar_state_ = 0.0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace kwopt
