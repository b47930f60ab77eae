#include "simroots/symmetric.hpp"

#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>

namespace simroots {

SymExpr SymExpr::variable(int num_vars, int k)
{
    if (k < 1 || k > num_vars)
        throw Error(ErrorCode::DegenerateInput, "variable index out of range");
    SymExpr x(num_vars);
    Exponents nu(num_vars, 0);
    nu[k - 1] = 1;
    x.add_term(nu, 1);
    return x;
}

std::int64_t SymExpr::coefficient(const Exponents& nu) const
{
    auto it = terms_.find(nu);
    return it == terms_.end() ? 0 : it->second;
}

void SymExpr::add_term(const Exponents& nu, std::int64_t coeff)
{
    if (static_cast<int>(nu.size()) != num_vars_)
        throw Error(ErrorCode::DegenerateInput, "exponent length mismatch");
    if (coeff == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(nu, coeff);
    if (!inserted) {
        it->second = detail::checked_add(it->second, coeff);
        if (it->second == 0)
            terms_.erase(it);
    }
}

SymExpr& SymExpr::operator+=(const SymExpr& other)
{
    for (const auto& [nu, c] : other.terms_)
        add_term(nu, c);
    return *this;
}

SymExpr SymExpr::scaled(std::int64_t factor) const
{
    SymExpr out(num_vars_);
    for (const auto& [nu, c] : terms_)
        out.add_term(nu, detail::checked_mul(c, factor));
    return out;
}

SymExpr SymExpr::times_variable(int k) const
{
    if (k < 1 || k > num_vars_)
        throw Error(ErrorCode::DegenerateInput, "variable index out of range");
    SymExpr out(num_vars_);
    for (const auto& [nu, c] : terms_) {
        Exponents raised = nu;
        ++raised[k - 1];
        out.add_term(raised, c);
    }
    return out;
}

int SymExpr::weight(const Exponents& nu)
{
    int w = 0;
    for (std::size_t k = 0; k < nu.size(); ++k)
        w += static_cast<int>(k + 1) * nu[k];
    return w;
}

bool SymExpr::is_isobaric(int w) const
{
    for (const auto& [nu, c] : terms_)
        if (weight(nu) != w)
            return false;
    return true;
}

std::string SymExpr::to_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    // print higher powers of e_1 first, which matches the usual textbook order
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [nu, c] = *it;
        std::int64_t mag = c < 0 ? -c : c;
        if (first)
            os << (c < 0 ? "-" : "");
        else
            os << (c < 0 ? " - " : " + ");
        first = false;

        bool has_var = false;
        std::ostringstream vars;
        for (std::size_t k = 0; k < nu.size(); ++k) {
            if (nu[k] == 0)
                continue;
            if (has_var)
                vars << '*';
            vars << 'e' << (k + 1);
            if (nu[k] > 1)
                vars << '^' << nu[k];
            has_var = true;
        }
        if (!has_var)
            os << mag;
        else if (mag == 1)
            os << vars.str();
        else
            os << mag << '*' << vars.str();
    }
    return os.str();
}

SymExpr power_sum_in_elementary(int m)
{
    if (m < 1 || m > kMaxSymbolicOrder)
        throw Error(ErrorCode::DegenerateInput, "power sum order out of range");

    // p[k] holds p_k for k = 1..m
    std::vector<SymExpr> p(m + 1, SymExpr(m));
    for (int k = 1; k <= m; ++k) {
        SymExpr pk(m);
        for (int j = 1; j <= k - 1; ++j) {
            const std::int64_t sign = ((k - 1 + j) % 2 == 0) ? 1 : -1;
            pk += p[j].times_variable(k - j).scaled(sign);
        }
        const std::int64_t sign = ((k - 1) % 2 == 0) ? 1 : -1;
        pk += SymExpr::variable(m, k).scaled(sign * k);
        p[k] = std::move(pk);
    }
    return p[m];
}

namespace {

void enumerate_partitions(int d, int part, int remaining, std::vector<int>& r,
                          std::vector<PartitionTerm>& out)
{
    if (part == 0) {
        if (remaining == 0) {
            // d! / prod_j (r_j! j^{r_j}); divide stepwise, each step stays exact
            std::int64_t w = factorial(d);
            for (int j = 1; j <= d; ++j) {
                for (int c = 1; c <= r[j - 1]; ++c)
                    w /= c;
                for (int c = 0; c < r[j - 1]; ++c)
                    w /= j;
            }
            out.push_back({r, w});
        }
        return;
    }
    for (int count = remaining / part; count >= 0; --count) {
        r[part - 1] = count;
        enumerate_partitions(d, part - 1, remaining - count * part, r, out);
    }
    r[part - 1] = 0;
}

template <typename T>
class ConcurrentTableCache {
public:
    template <typename Build>
    const T& get(int key, Build build)
    {
        {
            std::shared_lock lock(mutex_);
            auto it = tables_.find(key);
            if (it != tables_.end())
                return *it->second;
        }
        auto fresh = std::make_unique<T>(build(key));
        std::unique_lock lock(mutex_);
        auto [it, inserted] = tables_.try_emplace(key, std::move(fresh));
        return *it->second;
    }

private:
    std::shared_mutex mutex_;
    std::map<int, std::unique_ptr<T>> tables_;
};

} // namespace

PartitionTermTable partition_table(int d)
{
    if (d < 1 || d > kMaxSymbolicOrder)
        throw Error(ErrorCode::DegenerateInput, "partition degree out of range");
    PartitionTermTable table;
    table.degree = d;
    std::vector<int> r(d, 0);
    enumerate_partitions(d, d, d, r, table.terms);
    return table;
}

const SymExpr& power_sum_table(int m)
{
    static ConcurrentTableCache<SymExpr> cache;
    return cache.get(m, power_sum_in_elementary);
}

const PartitionTermTable& partition_table_cached(int d)
{
    static ConcurrentTableCache<PartitionTermTable> cache;
    return cache.get(d, partition_table);
}

} // namespace simroots
