#include <pcsp/errors.hh>
#include <pcsp/solvers.hh>

#include <algorithm>
#include <map>
#include <stdexcept>

using std::invalid_argument;
using std::optional;
using std::size_t;
using std::string;
using std::uint64_t;
using std::vector;

namespace pcsp
{
    GF2System::GF2System(int var_count) :
        _var_count(var_count)
    {
        if (var_count < 0)
            throw invalid_argument("negative variable count");
    }

    auto GF2System::add_equation(const vector<int> & vars, int rhs) -> void
    {
        vector<uint64_t> row((static_cast<size_t>(_var_count) + 63) / 64, 0);
        for (auto v : vars) {
            if (v < 0 || v >= _var_count)
                throw invalid_argument("variable out of range");
            row[v / 64] ^= uint64_t{1} << (v % 64);
        }
        _rows.push_back(std::move(row));
        _rhs.push_back(rhs & 1);
    }

    auto GF2System::coefficient(size_t row, int var) const -> int
    {
        return static_cast<int>((_rows[row][var / 64] >> (var % 64)) & 1);
    }

    auto GF2System::satisfied_by(const vector<int> & x) const -> bool
    {
        for (size_t r = 0; r < _rows.size(); ++r) {
            int sum = 0;
            for (int v = 0; v < _var_count; ++v)
                sum ^= coefficient(r, v) & x[v];
            if (sum != _rhs[r])
                return false;
        }
        return true;
    }

    auto solve_gf2(const GF2System & sys) -> optional<vector<int>>
    {
        auto rows = sys._rows;
        auto rhs = sys._rhs;
        int n = sys._var_count;
        size_t rank = 0;
        vector<int> pivot_col;
        for (int col = 0; col < n && rank < rows.size(); ++col) {
            auto bit = [&](size_t r) { return (rows[r][col / 64] >> (col % 64)) & 1; };
            size_t pivot = rank;
            while (pivot < rows.size() && ! bit(pivot))
                ++pivot;
            if (pivot == rows.size())
                continue;
            std::swap(rows[pivot], rows[rank]);
            std::swap(rhs[pivot], rhs[rank]);
            for (size_t r = 0; r < rows.size(); ++r)
                if (r != rank && bit(r)) {
                    for (size_t w = 0; w < rows[r].size(); ++w)
                        rows[r][w] ^= rows[rank][w];
                    rhs[r] ^= rhs[rank];
                }
            pivot_col.push_back(col);
            ++rank;
        }
        for (size_t r = rank; r < rows.size(); ++r)
            if (rhs[r])
                return std::nullopt;
        vector<int> x(n, 0);
        for (size_t r = 0; r < rank; ++r)
            x[pivot_col[r]] = rhs[r];
        return x;
    }

    auto IntLinearSystem::add_equation(vector<mpz_class> row, mpz_class rhs) -> void
    {
        if (static_cast<int>(row.size()) != var_count)
            throw invalid_argument("equation has the wrong number of coefficients");
        a.push_back(std::move(row));
        b.push_back(std::move(rhs));
    }

    auto IntLinearSystem::satisfied_by(const vector<mpz_class> & x) const -> bool
    {
        for (size_t i = 0; i < a.size(); ++i) {
            mpz_class sum = 0;
            for (int j = 0; j < var_count; ++j)
                sum += a[i][j] * x[j];
            if (sum != b[i])
                return false;
        }
        return true;
    }

    auto solve_diophantine_full(const IntLinearSystem & sys) -> optional<DiophantineSolution>
    {
        int n = sys.var_count;
        size_t m = sys.a.size();
        if (sys.b.size() != m)
            throw invalid_argument("inconsistent system dimensions");
        for (auto & row : sys.a)
            if (static_cast<int>(row.size()) != n)
                throw invalid_argument("inconsistent system dimensions");

        // Column operations act on H = A U; we keep H and U in column-major form.
        vector<vector<mpz_class>> h(n, vector<mpz_class>(m)), u(n, vector<mpz_class>(n, 0));
        for (int j = 0; j < n; ++j) {
            for (size_t i = 0; i < m; ++i)
                h[j][i] = sys.a[i][j];
            u[j][j] = 1;
        }
        auto subtract = [&](int target, int source, const mpz_class & q) {
            for (size_t i = 0; i < m; ++i)
                h[target][i] -= q * h[source][i];
            for (int i = 0; i < n; ++i)
                u[target][i] -= q * u[source][i];
        };

        int c = 0;
        vector<int> pivot_of_row(m, -1);
        for (size_t i = 0; i < m && c < n; ++i) {
            while (true) {
                int best = -1;
                for (int j = c; j < n; ++j)
                    if (h[j][i] != 0 && (best == -1 || abs(h[j][i]) < abs(h[best][i])))
                        best = j;
                if (best == -1)
                    break;
                std::swap(h[c], h[best]);
                std::swap(u[c], u[best]);
                bool clean = true;
                for (int j = c + 1; j < n; ++j)
                    if (h[j][i] != 0) {
                        mpz_class q;
                        mpz_fdiv_q(q.get_mpz_t(), h[j][i].get_mpz_t(), h[c][i].get_mpz_t());
                        subtract(j, c, q);
                        clean = clean && h[j][i] == 0;
                    }
                if (clean) {
                    pivot_of_row[i] = c++;
                    break;
                }
            }
        }

        vector<mpz_class> y(n, 0);
        for (size_t i = 0; i < m; ++i) {
            mpz_class rest = sys.b[i];
            int limit = pivot_of_row[i] == -1 ? c : pivot_of_row[i];
            for (int j = 0; j < limit; ++j)
                rest -= h[j][i] * y[j];
            if (pivot_of_row[i] == -1) {
                if (rest != 0)
                    return std::nullopt;
                continue;
            }
            auto & pivot = h[pivot_of_row[i]][i];
            if (! mpz_divisible_p(rest.get_mpz_t(), pivot.get_mpz_t()))
                return std::nullopt;
            mpz_divexact(y[pivot_of_row[i]].get_mpz_t(), rest.get_mpz_t(), pivot.get_mpz_t());
        }

        DiophantineSolution result;
        result.point.assign(n, 0);
        for (int j = 0; j < c; ++j)
            for (int i = 0; i < n; ++i)
                result.point[i] += u[j][i] * y[j];
        for (int j = c; j < n; ++j)
            result.kernel.push_back(u[j]);
        if (! sys.satisfied_by(result.point))
            throw InternalCheckFailure("Hermite normal form solution does not satisfy the system");
        return result;
    }

    auto solve_diophantine(const IntLinearSystem & sys) -> optional<vector<mpz_class>>
    {
        auto full = solve_diophantine_full(sys);
        if (! full)
            return std::nullopt;
        return full->point;
    }
}

namespace pcsp
{
    auto RationalInequalitySystem::add_row(vector<mpq_class> coeffs, Sense sense, mpq_class rhs) -> void
    {
        if (static_cast<int>(coeffs.size()) != var_count)
            throw invalid_argument("row has the wrong number of coefficients");
        for (auto & c : coeffs)
            c.canonicalize();
        rhs.canonicalize();
        rows.push_back(Row{std::move(coeffs), sense, std::move(rhs)});
    }

    auto RationalInequalitySystem::satisfied_by(const vector<mpq_class> & x) const -> bool
    {
        if (static_cast<int>(x.size()) != var_count)
            return false;
        for (auto & v : x)
            if (v < 0 || (unit_box && v > 1))
                return false;
        for (auto & row : rows) {
            mpq_class sum = 0;
            for (int j = 0; j < var_count; ++j)
                sum += row.coeffs[j] * x[j];
            if ((row.sense == Sense::le && sum > row.rhs) || (row.sense == Sense::ge && sum < row.rhs) || (row.sense == Sense::eq && sum != row.rhs))
                return false;
        }
        return true;
    }

    namespace
    {
        struct Tableau
        {
            vector<vector<mpq_class>> rows;  // last entry is the right-hand side
            vector<int> basis;
            vector<mpq_class> objective;     // reduced costs, last entry is minus the objective value
            int columns;

            auto pivot(size_t r, int e) -> void
            {
                auto p = rows[r][e];
                for (auto & v : rows[r])
                    v /= p;
                for (size_t i = 0; i < rows.size(); ++i)
                    if (i != r && rows[i][e] != 0) {
                        auto f = rows[i][e];
                        for (int j = 0; j <= columns; ++j)
                            rows[i][j] -= f * rows[r][j];
                    }
                if (objective[e] != 0) {
                    auto f = objective[e];
                    for (int j = 0; j <= columns; ++j)
                        objective[j] -= f * rows[r][j];
                }
                basis[r] = e;
            }

            auto set_objective(const vector<mpq_class> & c) -> void
            {
                objective.assign(columns + 1, 0);
                for (int j = 0; j < columns; ++j)
                    objective[j] = c[j];
                for (size_t i = 0; i < rows.size(); ++i)
                    if (objective[basis[i]] != 0) {
                        auto f = objective[basis[i]];
                        for (int j = 0; j <= columns; ++j)
                            objective[j] -= f * rows[i][j];
                    }
            }

            // Maximises over columns with allowed[j]; returns false when unbounded.
            auto run(const vector<bool> & allowed) -> bool
            {
                while (true) {
                    int e = -1;
                    for (int j = 0; j < columns; ++j)
                        if (allowed[j] && objective[j] > 0) {
                            e = j;
                            break;
                        }
                    if (e == -1)
                        return true;
                    int leave = -1;
                    mpq_class best;
                    for (size_t i = 0; i < rows.size(); ++i)
                        if (rows[i][e] > 0) {
                            mpq_class ratio = rows[i][columns] / rows[i][e];
                            if (leave == -1 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
                                leave = static_cast<int>(i);
                                best = ratio;
                            }
                        }
                    if (leave == -1)
                        return false;
                    pivot(static_cast<size_t>(leave), e);
                }
            }
        };
    }

    auto maximize_lp(const RationalInequalitySystem & sys, const vector<mpq_class> & objective) -> LpResult
    {
        int n = sys.var_count;
        if (static_cast<int>(objective.size()) != n)
            throw invalid_argument("objective has the wrong number of coefficients");

        vector<RationalInequalitySystem::Row> rows = sys.rows;
        for (auto & row : rows)
            if (static_cast<int>(row.coeffs.size()) != n)
                throw invalid_argument("row has the wrong number of coefficients");
        if (sys.unit_box)
            for (int j = 0; j < n; ++j) {
                vector<mpq_class> e(n, 0);
                e[j] = 1;
                rows.push_back({std::move(e), Sense::le, 1});
            }

        // Columns: structural, one slack per inequality, one artificial per row that needs it.
        size_t m = rows.size();
        int slacks = 0;
        for (auto & row : rows)
            slacks += row.sense != Sense::eq;
        vector<int> slack_col(m, -1);
        vector<mpq_class> slack_sign(m, 0);
        vector<bool> needs_artificial(m, false);
        int next = n;
        for (size_t i = 0; i < m; ++i) {
            bool flip = rows[i].rhs < 0;
            if (flip) {
                for (auto & v : rows[i].coeffs)
                    v = -v;
                rows[i].rhs = -rows[i].rhs;
            }
            if (rows[i].sense != Sense::eq) {
                slack_col[i] = next++;
                mpq_class sign = rows[i].sense == Sense::le ? 1 : -1;
                slack_sign[i] = flip ? mpq_class(-sign) : sign;
            }
            needs_artificial[i] = slack_col[i] == -1 || slack_sign[i] < 0;
        }
        int first_artificial = next;
        for (size_t i = 0; i < m; ++i)
            if (needs_artificial[i])
                ++next;

        Tableau t;
        t.columns = next;
        t.rows.assign(m, vector<mpq_class>(next + 1, 0));
        t.basis.assign(m, -1);
        int art = first_artificial;
        for (size_t i = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j)
                t.rows[i][j] = rows[i].coeffs[j];
            if (slack_col[i] != -1)
                t.rows[i][slack_col[i]] = slack_sign[i];
            t.rows[i][next] = rows[i].rhs;
            if (needs_artificial[i]) {
                t.rows[i][art] = 1;
                t.basis[i] = art++;
            }
            else
                t.basis[i] = slack_col[i];
        }

        vector<bool> all(next, true);
        vector<mpq_class> phase_one(next, 0);
        for (int j = first_artificial; j < next; ++j)
            phase_one[j] = -1;
        t.set_objective(phase_one);
        t.run(all);
        if (t.objective[next] != 0)
            return LpResult{LpStatus::infeasible, 0, {}};

        // Drive zero-level artificials out of the basis; rows where that fails are redundant.
        for (size_t i = 0; i < t.rows.size();) {
            if (t.basis[i] < first_artificial) {
                ++i;
                continue;
            }
            int e = -1;
            for (int j = 0; j < first_artificial; ++j)
                if (t.rows[i][j] != 0) {
                    e = j;
                    break;
                }
            if (e == -1) {
                t.rows.erase(t.rows.begin() + static_cast<long>(i));
                t.basis.erase(t.basis.begin() + static_cast<long>(i));
                continue;
            }
            t.pivot(i, e);
            ++i;
        }

        vector<bool> structural(next, false);
        for (int j = 0; j < first_artificial; ++j)
            structural[j] = true;
        vector<mpq_class> phase_two(next, 0);
        for (int j = 0; j < n; ++j)
            phase_two[j] = objective[j];
        t.set_objective(phase_two);
        if (! t.run(structural))
            return LpResult{LpStatus::unbounded, 0, {}};

        LpResult result{LpStatus::optimal, -t.objective[next], vector<mpq_class>(n, 0)};
        for (size_t i = 0; i < t.rows.size(); ++i)
            if (t.basis[i] < n)
                result.point[t.basis[i]] = t.rows[i][next];
        if (! sys.satisfied_by(result.point))
            throw InternalCheckFailure("simplex returned a point outside the feasible region");
        return result;
    }

    auto solve_lp_feasible(const RationalInequalitySystem & sys) -> optional<vector<mpq_class>>
    {
        auto result = maximize_lp(sys, vector<mpq_class>(sys.var_count, 0));
        if (result.status == LpStatus::infeasible)
            return std::nullopt;
        return result.point;
    }
}

namespace pcsp
{
    namespace
    {
        auto odd_denominators(const vector<mpq_class> & x) -> bool
        {
            return std::all_of(x.begin(), x.end(), [](const mpq_class & v) { return mpz_odd_p(v.get_den_mpz_t()) != 0; });
        }

        // An inequality a x <= c, from a system row or a box bound.
        struct Inequality
        {
            vector<mpq_class> a;
            mpq_class c;
        };

        auto inequalities_of(const RationalInequalitySystem & sys) -> vector<Inequality>
        {
            int n = sys.var_count;
            vector<Inequality> out;
            for (auto & row : sys.rows) {
                if (row.sense == Sense::le)
                    out.push_back({row.coeffs, row.rhs});
                else if (row.sense == Sense::ge) {
                    Inequality neg{row.coeffs, -row.rhs};
                    for (auto & v : neg.a)
                        v = -v;
                    out.push_back(std::move(neg));
                }
            }
            for (int j = 0; j < n; ++j) {
                vector<mpq_class> e(n, 0);
                e[j] = -1;
                out.push_back({e, 0});
                if (sys.unit_box) {
                    e[j] = 1;
                    out.push_back({e, 1});
                }
            }
            return out;
        }

        auto slack(const Inequality & q, const vector<mpq_class> & x) -> mpq_class
        {
            mpq_class sum = q.c;
            for (size_t j = 0; j < x.size(); ++j)
                sum -= q.a[j] * x[j];
            return sum;
        }

        auto integer_row(const vector<mpq_class> & coeffs, const mpq_class & rhs) -> std::pair<vector<mpz_class>, mpz_class>
        {
            mpz_class l = rhs.get_den();
            for (auto & v : coeffs)
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
            vector<mpz_class> row;
            for (auto & v : coeffs)
                row.push_back(mpz_class(v.get_num() * (l / v.get_den())));
            return {row, mpz_class(rhs.get_num() * (l / rhs.get_den()))};
        }

        // Coefficients c with sum_i c_i basis[i] = d, basis linearly independent.
        auto coordinates(const vector<vector<mpz_class>> & basis, const vector<mpq_class> & d) -> vector<mpq_class>
        {
            size_t k = basis.size(), n = d.size();
            vector<vector<mpq_class>> m(n, vector<mpq_class>(k + 1));
            for (size_t i = 0; i < n; ++i) {
                for (size_t j = 0; j < k; ++j)
                    m[i][j] = basis[j][i];
                m[i][k] = d[i];
            }
            vector<int> pivot_row(k, -1);
            size_t rank = 0;
            for (size_t col = 0; col < k; ++col) {
                size_t p = rank;
                while (p < n && m[p][col] == 0)
                    ++p;
                if (p == n)
                    throw InternalCheckFailure("kernel basis is not independent");
                std::swap(m[p], m[rank]);
                auto f = m[rank][col];
                for (auto & v : m[rank])
                    v /= f;
                for (size_t i = 0; i < n; ++i)
                    if (i != rank && m[i][col] != 0) {
                        auto g = m[i][col];
                        for (size_t j = 0; j <= k; ++j)
                            m[i][j] -= g * m[rank][j];
                    }
                pivot_row[col] = static_cast<int>(rank++);
            }
            for (size_t i = rank; i < n; ++i)
                if (m[i][k] != 0)
                    throw InternalCheckFailure("direction is not in the kernel lattice span");
            vector<mpq_class> c(k);
            for (size_t j = 0; j < k; ++j)
                c[j] = m[pivot_row[j]][k];
            return c;
        }
    }

    auto find_odd_denominator_point(const RationalInequalitySystem & sys) -> optional<vector<mpq_class>>
    {
        int n = sys.var_count;
        auto start = solve_lp_feasible(sys);
        if (! start)
            return std::nullopt;
        if (odd_denominators(*start))
            return start;

        // Split the inequalities into implied equalities and those with room somewhere;
        // the average of the witnessing points is a relative interior point.
        auto ineqs = inequalities_of(sys);
        vector<bool> implied(ineqs.size(), true);
        vector<vector<mpq_class>> witnesses{*start};
        vector<size_t> open;
        for (size_t i = 0; i < ineqs.size(); ++i)
            if (slack(ineqs[i], *start) > 0)
                implied[i] = false;
            else
                open.push_back(i);
        while (! open.empty()) {
            RationalInequalitySystem aug;
            aug.var_count = n + static_cast<int>(open.size());
            aug.unit_box = false;
            for (auto & row : sys.rows) {
                auto coeffs = row.coeffs;
                coeffs.resize(aug.var_count, 0);
                aug.add_row(std::move(coeffs), row.sense, row.rhs);
            }
            for (auto & q : ineqs) {
                auto coeffs = q.a;
                coeffs.resize(aug.var_count, 0);
                aug.add_row(std::move(coeffs), Sense::le, q.c);
            }
            vector<mpq_class> objective(aug.var_count, 0);
            for (size_t k = 0; k < open.size(); ++k) {
                auto coeffs = ineqs[open[k]].a;
                coeffs.resize(aug.var_count, 0);
                coeffs[n + k] = 1;
                aug.add_row(std::move(coeffs), Sense::le, ineqs[open[k]].c);
                vector<mpq_class> cap(aug.var_count, 0);
                cap[n + k] = 1;
                aug.add_row(std::move(cap), Sense::le, 1);
                objective[n + k] = 1;
            }
            auto best = maximize_lp(aug, objective);
            if (best.status != LpStatus::optimal)
                throw InternalCheckFailure("slack maximisation failed on a feasible system");
            if (best.value == 0)
                break;
            vector<mpq_class> x(best.point.begin(), best.point.begin() + n);
            witnesses.push_back(x);
            vector<size_t> still;
            for (auto i : open)
                if (slack(ineqs[i], x) > 0)
                    implied[i] = false;
                else
                    still.push_back(i);
            open = std::move(still);
        }
        vector<mpq_class> q(n, 0);
        for (auto & w : witnesses)
            for (int j = 0; j < n; ++j)
                q[j] += w[j];
        for (auto & v : q)
            v /= static_cast<long>(witnesses.size());

        // Affine hull E x = e, scaled to integers.
        IntLinearSystem hull{n, {}, {}};
        for (auto & row : sys.rows)
            if (row.sense == Sense::eq) {
                auto [a, b] = integer_row(row.coeffs, row.rhs);
                hull.add_equation(std::move(a), std::move(b));
            }
        for (size_t i = 0; i < ineqs.size(); ++i)
            if (implied[i]) {
                auto [a, b] = integer_row(ineqs[i].a, ineqs[i].c);
                hull.add_equation(std::move(a), std::move(b));
            }

        // x = z / (2m + 1): E z - 2 e m = e.
        IntLinearSystem odd{n + 1, {}, {}};
        IntLinearSystem homogeneous{n, {}, {}};
        for (size_t i = 0; i < hull.a.size(); ++i) {
            auto row = hull.a[i];
            row.push_back(-2 * hull.b[i]);
            odd.add_equation(std::move(row), hull.b[i]);
            homogeneous.add_equation(hull.a[i], 0);
        }
        auto zm = solve_diophantine(odd);
        if (! zm)
            return std::nullopt;
        mpz_class den = 2 * (*zm)[n] + 1;
        vector<mpq_class> w(n);
        for (int j = 0; j < n; ++j) {
            w[j] = mpq_class((*zm)[j], den);
            w[j].canonicalize();
        }

        auto kernel = solve_diophantine_full(homogeneous)->kernel;
        vector<mpq_class> d(n);
        for (int j = 0; j < n; ++j)
            d[j] = q[j] - w[j];
        auto c = kernel.empty() ? vector<mpq_class>{} : coordinates(kernel, d);

        // Round the coordinates to multiples of 3^-k, close enough that every open inequality keeps positive slack.
        mpq_class room = -1, spread = 0;
        for (size_t i = 0; i < ineqs.size(); ++i) {
            if (implied[i])
                continue;
            auto sl = slack(ineqs[i], q);
            if (room < 0 || sl < room)
                room = sl;
            mpq_class total = 0;
            for (auto & b : kernel) {
                mpq_class dot = 0;
                for (int j = 0; j < n; ++j)
                    dot += ineqs[i].a[j] * b[j];
                total += abs(dot);
            }
            spread = std::max(spread, total);
        }
        mpz_class scale = 1;
        while (room > 0 && spread / scale >= room)
            scale *= 3;
        vector<mpq_class> y = w;
        for (size_t i = 0; i < kernel.size(); ++i) {
            mpq_class scaled = c[i] * scale;
            mpz_class rounded;
            mpz_fdiv_q(rounded.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
            mpq_class ci(rounded, scale);
            ci.canonicalize();
            for (int j = 0; j < n; ++j)
                y[j] += ci * kernel[i][j];
        }
        if (! sys.satisfied_by(y) || ! odd_denominators(y))
            throw InternalCheckFailure("odd-denominator rounding left the feasible region");
        return y;
    }
}

namespace pcsp
{
    namespace
    {
        using Kind = PairRecipe::Kind;

        auto multiplicities(const Constraint & c) -> std::map<int, int>
        {
            std::map<int, int> m;
            for (auto v : c.vars)
                ++m[v];
            return m;
        }

        auto apply_b_map(int b_map, int bit) -> int
        {
            switch (b_map) {
            case 0: return bit;
            case 1: return 1 - bit;
            default: return b_map - 2;
            }
        }

        auto finish_yes(const Template & t, const SandwichSpec & spec, const Instance & x, vector<int> base_bits, vector<string> point) -> PromiseAnswer
        {
            Assignment witness(x.var_count);
            for (int v = 0; v < x.var_count; ++v)
                witness[v] = apply_b_map(spec.b_map, base_bits[v]);
            if (! satisfies(x, t, Side::b, witness))
                throw InternalCheckFailure("sandwich witness does not satisfy the B side");
            return PromiseAnswer{Answer::yes, spec.solver, witness, std::move(point), spec.externally_justified};
        }

        auto no(const SandwichSpec & spec) -> PromiseAnswer
        {
            return PromiseAnswer{Answer::no, spec.solver, std::nullopt, {}, spec.externally_justified};
        }

        auto uses_impossible(const SandwichSpec & spec, const Instance & x) -> bool
        {
            return std::any_of(x.constraints.begin(), x.constraints.end(), [&](const Constraint & c) { return spec.pairs[c.pair_index].kind == Kind::impossible; });
        }

        [[noreturn]] auto wrong_recipe(const string & backend) -> void
        {
            throw InternalCheckFailure("recipe kind not supported by the " + backend + " backend");
        }

        auto solve_with_gf2(const Template & t, const SandwichSpec & spec, const Instance & x) -> PromiseAnswer
        {
            GF2System sys(x.var_count);
            for (auto & c : x.constraints) {
                auto & recipe = spec.pairs[c.pair_index];
                switch (recipe.kind) {
                case Kind::parity:
                case Kind::disequality: sys.add_equation(c.vars, recipe.kind == Kind::parity ? recipe.rhs : 1); break;
                case Kind::unconstrained: break;
                default: wrong_recipe("GF2");
                }
            }
            auto solution = solve_gf2(sys);
            if (! solution)
                return no(spec);
            vector<string> point;
            for (auto v : *solution)
                point.push_back(std::to_string(v));
            return finish_yes(t, spec, x, *solution, std::move(point));
        }

        auto solve_with_diophantine(const Template & t, const SandwichSpec & spec, const Instance & x) -> PromiseAnswer
        {
            IntLinearSystem sys{x.var_count, {}, {}};
            for (auto & c : x.constraints) {
                auto & recipe = spec.pairs[c.pair_index];
                if (recipe.kind == Kind::unconstrained)
                    continue;
                if (recipe.kind != Kind::exact_sum && recipe.kind != Kind::disequality)
                    wrong_recipe("Diophantine");
                vector<mpz_class> row(x.var_count, 0);
                for (auto [v, m] : multiplicities(c))
                    row[v] = m;
                sys.add_equation(std::move(row), recipe.kind == Kind::exact_sum ? recipe.rhs : 1);
            }
            auto solution = solve_diophantine(sys);
            if (! solution)
                return no(spec);
            vector<int> bits;
            vector<string> point;
            for (auto & z : *solution) {
                bits.push_back(z >= 1 ? 1 : 0);
                point.push_back(z.get_str());
            }
            return finish_yes(t, spec, x, bits, std::move(point));
        }

        auto solve_with_lp(const Template & t, const SandwichSpec & spec, const Instance & x) -> PromiseAnswer
        {
            RationalInequalitySystem sys;
            sys.var_count = x.var_count;
            for (auto & c : x.constraints) {
                auto & recipe = spec.pairs[c.pair_index];
                if (recipe.kind == Kind::unconstrained)
                    continue;
                vector<mpq_class> row(x.var_count, 0);
                for (auto [v, m] : multiplicities(c))
                    row[v] = m;
                switch (recipe.kind) {
                case Kind::at_most: sys.add_row(std::move(row), Sense::le, recipe.rhs); break;
                case Kind::at_least: sys.add_row(std::move(row), Sense::ge, recipe.rhs); break;
                case Kind::disequality: sys.add_row(std::move(row), Sense::eq, 1); break;
                default: wrong_recipe("LP");
                }
            }
            auto y = find_odd_denominator_point(sys);
            if (! y)
                return no(spec);
            vector<int> bits;
            vector<string> point;
            for (auto & v : *y) {
                bits.push_back(2 * v > 1 ? 1 : 0);
                point.push_back(v.get_str());
            }
            return finish_yes(t, spec, x, bits, std::move(point));
        }
    }

    auto solve_pcsp(const Template & t, const SandwichSpec & spec, const Instance & x) -> PromiseAnswer
    {
        x.validate(t);
        if (spec.solver != SandwichSolver::constant && spec.pairs.size() != t.size())
            throw invalid_argument("sandwich recipe does not match the template");
        if (spec.solver == SandwichSolver::constant) {
            Assignment all(x.var_count, spec.constant);
            if (! satisfies(x, t, Side::b, all))
                return no(spec);
            return PromiseAnswer{Answer::yes, spec.solver, all, vector<string>(x.var_count, std::to_string(spec.constant)), false};
        }
        if (uses_impossible(spec, x))
            return no(spec);
        switch (spec.solver) {
        case SandwichSolver::gf2: return solve_with_gf2(t, spec, x);
        case SandwichSolver::diophantine: return solve_with_diophantine(t, spec, x);
        case SandwichSolver::lp: return solve_with_lp(t, spec, x);
        case SandwichSolver::constant: break;
        }
        throw InternalCheckFailure("unhandled sandwich solver");
    }

    auto solve_pcsp(const Template & t, const Instance & x) -> PromiseAnswer
    {
        return solve_pcsp(t, sandwich(t), x);
    }

    auto brute_force_promise(const Template & t, const Instance & x, int cap) -> BruteForceResult
    {
        x.validate(t);
        if (x.var_count > cap || x.var_count > 62)
            throw ResourceLimit("brute force limited to " + std::to_string(cap) + " variables");
        BruteForceResult result{false, false};
        Tuple image;
        auto holds = [&](uint64_t mask, Side side) {
            for (auto & c : x.constraints) {
                image.resize(c.vars.size());
                for (size_t i = 0; i < c.vars.size(); ++i)
                    image[i] = static_cast<int>((mask >> c.vars[i]) & 1);
                auto & pair = t.pairs()[c.pair_index];
                if (! (side == Side::a ? pair.a : pair.b).contains(image))
                    return false;
            }
            return true;
        };
        for (uint64_t mask = 0; mask < (uint64_t{1} << x.var_count) && ! (result.a_sat && result.b_sat); ++mask) {
            result.a_sat = result.a_sat || holds(mask, Side::a);
            result.b_sat = result.b_sat || holds(mask, Side::b);
        }
        return result;
    }
}
