#include "crnrd/stoich.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace crnrd {

Eigen::MatrixXd wegscheider_matrix(const ReactionNetwork& net) {
    Eigen::MatrixXd w(net.num_species(), net.num_reactions());
    const auto& rs = net.reactions();
    for (int r = 0; r < net.num_reactions(); ++r)
        w.col(r) = rs[r].product.coeffs - rs[r].reactant.coeffs;
    return w;
}

namespace {

RatMatrix exact_wegscheider_transpose(const ReactionNetwork& net) {
    const auto& rs = net.reactions();
    RatMatrix wt(static_cast<std::size_t>(net.num_reactions()),
                 std::vector<Rat>(static_cast<std::size_t>(net.num_species()), Rat(0)));
    for (int r = 0; r < net.num_reactions(); ++r)
        for (int i = 0; i < net.num_species(); ++i)
            wt[r][i] = rs[r].product.exact[i] - rs[r].reactant.exact[i];
    return wt;
}

Eigen::MatrixXd svd_kernel_rows(const Eigen::MatrixXd& a) {
    // Rows spanning ker(a), a is r x c; kernel tolerance 1e-10 * sigma_max.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
    const auto& sigma = svd.singularValues();
    double tol = sigma.size() ? 1e-10 * sigma[0] : 0.0;
    int rank = 0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i)
        if (sigma[i] > tol) ++rank;
    const Eigen::Index c = a.cols();
    Eigen::MatrixXd q(c - rank, c);
    for (Eigen::Index i = rank; i < c; ++i) q.row(i - rank) = svd.matrixV().col(i);
    // Sign rule: first nonzero entry positive.
    for (Eigen::Index i = 0; i < q.rows(); ++i)
        for (Eigen::Index j = 0; j < c; ++j)
            if (std::abs(q(i, j)) > 1e-12) {
                if (q(i, j) < 0) q.row(i) = -q.row(i);
                break;
            }
    return q;
}

} // namespace

Eigen::MatrixXd conservation_basis(const ReactionNetwork& net, bool* exact) {
    if (net.has_exact_stoichiometry()) {
        if (exact) *exact = true;
        RatMatrix basis = null_space(exact_wegscheider_transpose(net));
        basis = canonicalize_basis(std::move(basis));
        if (basis.empty())
            return Eigen::MatrixXd(0, net.num_species());
        return to_eigen(basis);
    }
    if (exact) *exact = false;
    return svd_kernel_rows(wegscheider_matrix(net).transpose());
}

MassVector mass_vector(const Eigen::MatrixXd& Q, const Eigen::VectorXd& u0_mean) {
    for (Eigen::Index i = 0; i < u0_mean.size(); ++i)
        if (u0_mean[i] < 0.0)
            throw Error(ErrorKind::NegativeConcentration, "u0_mean must be nonnegative");
    MassVector mv;
    mv.values = Q * u0_mean;
    for (Eigen::Index j = 0; j < mv.values.size(); ++j)
        if (mv.values[j] <= 0.0) mv.nonpositive_warning = true;
    return mv;
}

namespace {

// Connected components of the undirected complex graph (union-find).
std::vector<std::vector<int>> undirected_components(int n_vertices,
                                                    const std::vector<std::pair<int, int>>& edges) {
    std::vector<int> parent(n_vertices);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [a, b] : edges) parent[find(a)] = find(b);
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(n_vertices, -1);
    for (int v = 0; v < n_vertices; ++v) {
        int root = find(v);
        if (comp_of[root] < 0) {
            comp_of[root] = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        comps[comp_of[root]].push_back(v);
    }
    return comps;
}

// Kosaraju strong components, in vertex-sorted output order.
std::vector<std::vector<int>> strong_components_of(int n,
                                                   const std::vector<std::pair<int, int>>& edges) {
    std::vector<std::vector<int>> adj(n), radj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        radj[b].push_back(a);
    }
    std::vector<bool> seen(n, false);
    std::vector<int> order;
    std::function<void(int)> dfs1 = [&](int v) {
        seen[v] = true;
        for (int w : adj[v])
            if (!seen[w]) dfs1(w);
        order.push_back(v);
    };
    for (int v = 0; v < n; ++v)
        if (!seen[v]) dfs1(v);
    std::vector<int> comp_of(n, -1);
    std::function<void(int, int)> dfs2 = [&](int v, int c) {
        comp_of[v] = c;
        for (int w : radj[v])
            if (comp_of[w] < 0) dfs2(w, c);
    };
    int n_comp = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (comp_of[*it] < 0) dfs2(*it, n_comp++);
    std::vector<std::vector<int>> comps(n_comp);
    for (int v = 0; v < n; ++v) comps[comp_of[v]].push_back(v);
    return comps;
}

} // namespace

StoichData analyze_stoichiometry(const ReactionNetwork& net) {
    StoichData data;
    data.W = wegscheider_matrix(net);
    data.Q = conservation_basis(net, &data.exact_conservation);
    data.m = static_cast<int>(data.Q.rows());
    if (net.has_exact_stoichiometry())
        data.rank_W = rational_rank(exact_wegscheider_transpose(net));
    else {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(data.W);
        double tol = 1e-10 * svd.singularValues()[0];
        data.rank_W = static_cast<int>((svd.singularValues().array() > tol).count());
    }

    std::vector<std::pair<int, int>> edges;
    for (int r = 0; r < net.num_reactions(); ++r)
        edges.emplace_back(net.reactant_complex(r), net.product_complex(r));
    const int nc = net.num_complexes();
    data.linkage_classes = undirected_components(nc, edges);
    data.strong_components = strong_components_of(nc, edges);

    // Weak reversibility: each linkage class is a single strong component.
    data.weakly_reversible = data.linkage_classes.size() == data.strong_components.size();

    data.deficiency = nc - static_cast<int>(data.linkage_classes.size()) - data.rank_W;
    return data;
}

} // namespace crnrd
