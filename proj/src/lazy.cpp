#include "superstar/lazy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace superstar {

namespace {

double exponential(Rng& rng, double rate) { return -std::log1p(-uniform01(rng)) / rate; }

}  // namespace

LazySuperstarProcess::LazySuperstarProcess(const SuperstarSpec& spec, const LumpedSuperstarState& initial, double r)
    : spec_(spec), r_(r) {
  check_fitness(r);
  spec_.validate();
  if (spec_.k < 3) throw std::invalid_argument("the lazy engine needs k >= 3");
  initial.validate(spec_);
  lm_ = std::uint64_t{spec_.leaves} * spec_.reservoir;
  const std::uint32_t chain_len = spec_.chain_length();
  explicit_len_ = chain_len - 1;

  const std::uint32_t leaves = spec_.leaves;
  reservoir_ = initial.reservoir_mutants;
  std::vector<std::uint64_t> a(leaves), b(leaves);
  for (std::uint32_t i = 0; i < leaves; ++i) {
    a[i] = reservoir_[i];
    b[i] = spec_.reservoir - reservoir_[i];
    reservoir_total_ += reservoir_[i];
  }
  mutant_reservoir_.reset(leaves);
  plain_reservoir_.reset(leaves);
  mutant_reservoir_.assign(a);
  plain_reservoir_.assign(b);

  if (spec_.k == 3) {
    anchors_.resize(leaves);
    for (std::uint32_t i = 0; i < leaves; ++i) anchors_[i].push_back({0.0, initial.chain[i]});
    centre_known_ = initial.centre_mutant ? 1 : 0;
    return;
  }

  chain_.resize(std::size_t{leaves} * explicit_len_);
  for (std::uint32_t i = 0; i < leaves; ++i) {
    for (std::uint32_t j = 1; j < chain_len; ++j) {
      const std::uint8_t x = initial.chain[std::size_t{i} * chain_len + j];
      chain_[std::size_t{i} * explicit_len_ + j - 1] = x;
      explicit_mutants_ += x;
    }
    end_mutants_ += explicit_mutant(i, explicit_len_) ? 1 : 0;
  }
  first_.resize(leaves);
  std::vector<double> bounds(leaves), rates(leaves);
  for (std::uint32_t i = 0; i < leaves; ++i) {
    first_[i].reset(0.0, initial.chain[std::size_t{i} * chain_len], first_rates(i));
    bounds[i] = first_[i].hazard_bound();
    rates[i] = chain_rate(i);
  }
  first_bounds_.reset(leaves);
  first_bounds_.assign(bounds);
  chain_rates_.reset(leaves);
  chain_rates_.assign(rates);
  centre_.reset(0.0, initial.centre_mutant ? 1.0 : 0.0, centre_rates());
}

TwoStateRates LazySuperstarProcess::first_rates(std::uint32_t leaf) const {
  const bool second = explicit_mutant(leaf, 1);
  const double a = reservoir_[leaf];
  return {r_ * a, static_cast<double>(spec_.reservoir) - a, second ? 1.0 : 0.0, second ? 0.0 : r_};
}

TwoStateRates LazySuperstarProcess::centre_rates() const {
  const double e = static_cast<double>(end_mutants_);
  const double lm = static_cast<double>(lm_);
  const double a = static_cast<double>(reservoir_total_);
  return {r_ * e, static_cast<double>(spec_.leaves) - e, a / lm, r_ * (lm - a) / lm};
}

double LazySuperstarProcess::chain_rate(std::uint32_t leaf) const {
  double w = 0.0;
  for (std::uint32_t p = 1; p < explicit_len_; ++p) {
    const bool from = explicit_mutant(leaf, p);
    if (from != explicit_mutant(leaf, p + 1)) w += from ? r_ : 1.0;
  }
  return w;
}

void LazySuperstarProcess::set_explicit(std::uint32_t leaf, std::uint32_t position, bool mutant) {
  auto& flag = chain_[std::size_t{leaf} * explicit_len_ + position - 1];
  if ((flag != 0) == mutant) return;
  flag = mutant ? 1 : 0;
  if (mutant) {
    ++explicit_mutants_;
  } else {
    --explicit_mutants_;
  }
  if (position == explicit_len_) {
    if (mutant) {
      ++end_mutants_;
    } else {
      --end_mutants_;
    }
    centre_.rebase(time_, centre_rates());
  }
  chain_rates_.set(leaf, chain_rate(leaf));
}

void LazySuperstarProcess::change_reservoir(std::uint32_t leaf, bool increase) {
  auto& a = reservoir_[leaf];
  if (increase) {
    ++a;
    ++reservoir_total_;
  } else {
    --a;
    --reservoir_total_;
  }
  mutant_reservoir_.set(leaf, a);
  plain_reservoir_.set(leaf, spec_.reservoir - a);
  if (spec_.k > 3) {
    first_[leaf].rebase(time_, first_rates(leaf));
    first_bounds_.set(leaf, first_[leaf].hazard_bound());
  }
}

bool LazySuperstarProcess::settle_chained(Rng& rng, bool& fixated) {
  const bool full = reservoir_total_ == lm_ && explicit_mutants_ == std::uint64_t{spec_.leaves} * explicit_len_;
  const bool none = reservoir_total_ == 0 && explicit_mutants_ == 0;
  if (!full && !none) return false;
  const std::uint8_t target = full ? 1 : 0;
  auto frozen = [target](const TwoStateBelief& b) {
    return b.anchor_probability() == target && (target ? b.rates().down == 0.0 : b.rates().up == 0.0);
  };
  for (std::uint32_t i = 0; i < spec_.leaves; ++i) {
    if (frozen(first_[i])) continue;
    const std::uint8_t x = first_[i].reveal(time_, rng);
    first_bounds_.set(i, first_[i].hazard_bound());
    if (x != target) return false;
  }
  if (!frozen(centre_) && centre_.reveal(time_, rng) != target) return false;
  fixated = full;
  return true;
}

AbsorptionOutcome LazySuperstarProcess::run_chained(Rng& rng, const RunOptions& options) {
  std::uint64_t steps = 0;
  bool fixated = false;
  while (!settle_chained(rng, fixated)) {
    if (options.step_budget && steps >= *options.step_budget) throw StepBudgetExceeded(*options.step_budget);
    const double centre_bound = centre_.hazard_bound();
    const double first_bound = first_bounds_.total();
    const double total = centre_bound + first_bound + chain_rates_.total();
    if (!(total > 0.0)) throw std::logic_error("lazy process has no event left but is not absorbed");
    time_ += exponential(rng, total);
    const double u = uniform01(rng) * total;

    if (u < centre_bound) {
      // Centre overwrites a reservoir vertex: up when it is a mutant, down otherwise.
      const TwoStateRates cr = centre_.rates();
      const double p = centre_.probability_at(time_);
      const double up = cr.kill1 * p, down = cr.kill0 * (1.0 - p);
      const double v = uniform01(rng) * centre_bound;
      if (v >= up + down) continue;
      const bool increase = v < up;
      const auto& tree = increase ? plain_reservoir_ : mutant_reservoir_;
      const auto leaf = static_cast<std::uint32_t>(tree.find(uniform_below(rng, tree.total())));
      change_reservoir(leaf, increase);
      centre_.reset(time_, increase ? 1.0 : 0.0, centre_rates());
    } else if (u < centre_bound + first_bound) {
      // Second chain vertex copies the first.
      const auto leaf = static_cast<std::uint32_t>(first_bounds_.find(u - centre_bound));
      TwoStateBelief& belief = first_[leaf];
      if (!(belief.hazard_bound() > 0.0)) continue;
      if (uniform01(rng) * belief.hazard_bound() >= belief.hazard_at(time_)) continue;
      const bool mutant = !explicit_mutant(leaf, 1);
      set_explicit(leaf, 1, mutant);
      belief.reset(time_, mutant ? 1.0 : 0.0, first_rates(leaf));
      first_bounds_.set(leaf, belief.hazard_bound());
    } else {
      const auto leaf = static_cast<std::uint32_t>(chain_rates_.find(u - centre_bound - first_bound));
      double v = uniform01(rng) * chain_rates_.weight(leaf);
      std::uint32_t position = 0;
      for (std::uint32_t p = 1; p < explicit_len_; ++p) {
        const bool from = explicit_mutant(leaf, p);
        if (from == explicit_mutant(leaf, p + 1)) continue;
        position = p;
        const double w = from ? r_ : 1.0;
        if (v < w) break;
        v -= w;
      }
      if (position == 0) continue;
      set_explicit(leaf, position + 1, explicit_mutant(leaf, position));
    }
    ++steps;
  }
  return {fixated ? Outcome::Fixation : Outcome::Extinction, steps, 0};
}

std::uint8_t LazySuperstarProcess::first_at(std::uint32_t leaf, double time, Rng& rng) {
  auto& anchors = anchors_[leaf];
  // Drop anchors older than the last one at or before the centre's known time.
  std::size_t keep = 0;
  while (keep + 1 < anchors.size() && anchors[keep + 1].time <= centre_known_time_) ++keep;
  if (keep > 0) anchors.erase(anchors.begin(), anchors.begin() + static_cast<std::ptrdiff_t>(keep));

  std::size_t right = 0;
  while (right < anchors.size() && anchors[right].time <= time) ++right;
  const Anchor& left = anchors[right - 1];
  if (left.time == time) return left.value;

  const double a = reservoir_[leaf];
  const double up = r_ * a, down = static_cast<double>(spec_.reservoir) - a;
  double p1 = two_state_transition(left.value, up, down, time - left.time);
  if (right < anchors.size()) {
    const Anchor& next = anchors[right];
    const double gap = next.time - time;
    const double to_next_from1 = next.value ? two_state_transition(1, up, down, gap)
                                            : 1.0 - two_state_transition(1, up, down, gap);
    const double to_next_from0 = next.value ? two_state_transition(0, up, down, gap)
                                            : 1.0 - two_state_transition(0, up, down, gap);
    const double w1 = p1 * to_next_from1, w0 = (1.0 - p1) * to_next_from0;
    p1 = w1 / (w0 + w1);
  }
  const std::uint8_t y = uniform01(rng) < p1 ? 1 : 0;
  anchors.insert(anchors.begin() + static_cast<std::ptrdiff_t>(right), Anchor{time, y});
  return y;
}

std::uint8_t LazySuperstarProcess::centre_at(double time, Rng& rng) {
  // Each chain end copies itself into the centre at rate equal to its
  // fitness; candidates at the maximal rate are thinned by fitness. The
  // centre holds the value of the last accepted copy before `time`.
  const double top = std::max(r_, 1.0);
  const double candidate_rate = top * spec_.leaves;
  std::uint8_t value = centre_known_;
  double s = time;
  while (true) {
    s -= exponential(rng, candidate_rate);
    if (s <= centre_known_time_) break;
    const auto leaf = static_cast<std::uint32_t>(uniform_below(rng, spec_.leaves));
    const std::uint8_t y = first_at(leaf, s, rng);
    if (uniform01(rng) * top < (y ? r_ : 1.0)) {
      value = y;
      break;
    }
  }
  centre_known_ = value;
  centre_known_time_ = time;
  return value;
}

AbsorptionOutcome LazySuperstarProcess::run_short(Rng& rng, const RunOptions& options) {
  std::uint64_t steps = 0;
  const double lm = static_cast<double>(lm_);
  while (true) {
    const double a = static_cast<double>(reservoir_total_);
    if (reservoir_total_ == 0 || reservoir_total_ == lm_) {
      const std::uint8_t target = reservoir_total_ == lm_ ? 1 : 0;
      bool settled = centre_at(time_, rng) == target;
      for (std::uint32_t i = 0; settled && i < spec_.leaves; ++i) {
        const auto& last = anchors_[i].back();
        if (last.value == target) continue;  // with every reservoir vertex equal, this value is permanent
        settled = first_at(i, time_, rng) == target;
      }
      if (settled) return {target ? Outcome::Fixation : Outcome::Extinction, steps, 0};
    }
    if (options.step_budget && steps >= *options.step_budget) throw StepBudgetExceeded(*options.step_budget);

    const double up = r_ * (lm - a) / lm, down = a / lm;
    const double bound = std::max(up, down);
    time_ += exponential(rng, bound);
    const std::uint8_t centre = centre_at(time_, rng);
    if (uniform01(rng) * bound >= (centre ? up : down)) continue;
    const bool increase = centre != 0;
    const auto& tree = increase ? plain_reservoir_ : mutant_reservoir_;
    const auto leaf = static_cast<std::uint32_t>(tree.find(uniform_below(rng, tree.total())));
    first_at(leaf, time_, rng);
    change_reservoir(leaf, increase);
    ++steps;
  }
}

AbsorptionOutcome LazySuperstarProcess::run(Rng& rng, const RunOptions& options) {
  return spec_.k == 3 ? run_short(rng, options) : run_chained(rng, options);
}

AbsorptionOutcome run_lazy_superstar(const SuperstarSpec& spec, const LumpedSuperstarState& initial, double r,
                                     Rng& rng, const RunOptions& options) {
  LazySuperstarProcess process(spec, initial, r);
  return process.run(rng, options);
}

}  // namespace superstar
