#include "packsim/config_space.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace packsim {

void TypedSystem::validate() const {
    if (sizes.empty()) throw std::invalid_argument("TypedSystem: no types");
    for (const Rational& r : sizes)
        if (!(r > 0 && r <= 1)) throw std::invalid_argument("TypedSystem: sizes must lie in (0,1]");
    if (!probs.empty()) {
        if (probs.size() != sizes.size())
            throw std::invalid_argument("TypedSystem: probs/sizes length mismatch");
        Rational sum = 0;
        for (const Rational& p : probs) {
            if (p < 0) throw std::invalid_argument("TypedSystem: negative probability");
            sum += p;
        }
        if (sum != 1) throw std::invalid_argument("TypedSystem: probabilities must sum to 1");
    }
}

namespace {

struct Dfs {
    const std::vector<Rational>& sizes;
    Rational min_size;
    std::int64_t budget;
    std::int64_t visited = 0;
    Configuration current;
    std::vector<Configuration> out;

    static std::int64_t floor_ratio(const Rational& r) {
        boost::multiprecision::cpp_int q =
            boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
        return q.convert_to<std::int64_t>();
    }

    void walk(int type, Rational residual) {
        if (++visited > budget) throw EnumerationBudgetExceeded(budget);
        int n = static_cast<int>(sizes.size());
        if (type == n) {
            if (residual < min_size) out.push_back(current);  // nothing more fits anywhere
            return;
        }
        std::int64_t max_count = floor_ratio(residual / sizes[type]);
        Rational left = residual;
        for (std::int64_t c = 0; c <= max_count; ++c) {
            current[type] = static_cast<std::int32_t>(c);
            walk(type + 1, left);
            left -= sizes[type];
        }
        current[type] = 0;
    }
};

}  // namespace

std::vector<Configuration> enumerate_maximal(const std::vector<Rational>& sizes, std::int64_t budget) {
    if (sizes.empty()) throw std::invalid_argument("enumerate_maximal: no types");
    for (const Rational& r : sizes)
        if (!(r > 0 && r <= 1))
            throw std::invalid_argument("enumerate_maximal: sizes must lie in (0,1]");
    Dfs dfs{sizes, *std::min_element(sizes.begin(), sizes.end()), budget, 0, {}, {}};
    dfs.current.assign(sizes.size(), 0);
    dfs.walk(0, Rational(1));
    std::sort(dfs.out.begin(), dfs.out.end());
    return dfs.out;
}

std::vector<Configuration> reduced_configurations(int j_levels) {
    if (j_levels < 2) throw std::invalid_argument("reduced_configurations: J must be at least 2");
    const int dim = 2 * j_levels;
    std::vector<Configuration> out;
    out.reserve(4 * j_levels - 4);
    auto basis = [dim](int j, std::int32_t count) {
        Configuration k(dim, 0);
        k[j] = count;
        return k;
    };
    for (int m = 0; m < j_levels; ++m) out.push_back(basis(2 * m, std::int32_t{1} << m));
    for (int m = 1; m < j_levels; ++m) out.push_back(basis(2 * m + 1, 3 * (std::int32_t{1} << (m - 1))));
    for (int m = 2; m < j_levels; ++m) {
        Configuration k = basis(2 * m, (std::int32_t{1} << m) / 3);
        k[1] = 1;
        out.push_back(k);
    }
    for (int m = 1; m < j_levels; ++m) {
        Configuration k = basis(2 * m + 1, std::int32_t{1} << (m - 1));
        k[1] = 1;
        out.push_back(k);
    }
    return out;
}

std::int64_t weight(const Configuration& k, const std::vector<std::int64_t>& queue_sizes) {
    if (k.size() != queue_sizes.size())
        throw std::invalid_argument("weight: dimension mismatch");
    std::int64_t w = 0;
    for (std::size_t j = 0; j < k.size(); ++j) w += static_cast<std::int64_t>(k[j]) * queue_sizes[j];
    return w;
}

MaxWeightResult max_weight(const std::vector<Configuration>& configs,
                           const std::vector<std::int64_t>& queue_sizes) {
    if (configs.empty()) throw std::invalid_argument("max_weight: empty configuration list");
    MaxWeightResult best{0, weight(configs[0], queue_sizes)};
    for (int i = 1; i < static_cast<int>(configs.size()); ++i) {
        std::int64_t w = weight(configs[i], queue_sizes);
        if (w > best.value) best = MaxWeightResult{i, w};
    }
    return best;
}

std::string configuration_str(const Configuration& k) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (i) os << ",";
        os << k[i];
    }
    os << ")";
    return os.str();
}

}  // namespace packsim
