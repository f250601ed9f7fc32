// Test-only reference implementations, deliberately written on different
// code paths than the library: dense math, O(N^2) scans and closed forms
// that the fast implementations are checked against.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "trxcat/cleaning.hpp"
#include "trxcat/metrics.hpp"

namespace oracles {

// Dense tf-idf with the smoothed formula and l2 normalization.
inline std::vector<std::vector<double>> dense_tfidf(
    const std::vector<std::vector<std::string>>& docs, std::size_t min_df,
    std::vector<std::string>* out_terms = nullptr) {
    std::vector<std::string> terms;
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::set<std::string> seen(doc.begin(), doc.end());
        for (const auto& t : seen) {
            if (df.find(t) == df.end()) {
                // first-appearance order requires a scan over docs, not map order
            }
            ++df[t];
        }
    }
    std::set<std::string> added;
    for (const auto& doc : docs) {
        for (const auto& t : doc) {
            if (df.at(t) >= min_df && added.insert(t).second) terms.push_back(t);
        }
    }
    const double n = static_cast<double>(docs.size());
    std::vector<double> idf(terms.size());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        idf[j] = std::log((1.0 + n) / (1.0 + static_cast<double>(df.at(terms[j])))) + 1.0;
    }
    std::vector<std::vector<double>> rows;
    for (const auto& doc : docs) {
        std::vector<double> row(terms.size(), 0.0);
        for (const auto& t : doc) {
            auto it = std::find(terms.begin(), terms.end(), t);
            if (it != terms.end()) row[static_cast<std::size_t>(it - terms.begin())] += 1.0;
        }
        for (std::size_t j = 0; j < row.size(); ++j) row[j] *= idf[j];
        double norm = 0.0;
        for (double v : row) norm += v * v;
        if (norm > 0.0) {
            norm = std::sqrt(norm);
            for (double& v : row) v /= norm;
        }
        rows.push_back(std::move(row));
    }
    if (out_terms) *out_terms = terms;
    return rows;
}

inline double dense_cosine(const std::vector<double>& a, const std::vector<double>& b) {
    double dot = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
    return dot;  // rows are already unit or zero
}

// Every (i < j) pair at or above the threshold, by full pairwise scan.
inline std::vector<std::tuple<std::size_t, std::size_t, double>> brute_force_pairs(
    const std::vector<std::vector<double>>& rows, double threshold) {
    std::vector<std::tuple<std::size_t, std::size_t, double>> pairs;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = i + 1; j < rows.size(); ++j) {
            const double c = dense_cosine(rows[i], rows[j]);
            if (c >= threshold) pairs.emplace_back(i, j, c);
        }
    }
    return pairs;
}

// Greedy earliest-kept filter by direct O(N^2) scan over dense rows.
inline std::vector<std::size_t> brute_force_dedup(const std::vector<std::vector<double>>& rows,
                                                  double threshold) {
    std::vector<std::size_t> kept;
    for (std::size_t j = 0; j < rows.size(); ++j) {
        bool drop = false;
        for (std::size_t i : kept) {
            if (dense_cosine(rows[i], rows[j]) >= threshold) {
                drop = true;
                break;
            }
        }
        if (!drop) kept.push_back(j);
    }
    return kept;
}

// Multinomial naive Bayes posteriors from first principles: counts,
// Laplace smoothing, normalized in probability space.
struct NbOracle {
    std::vector<double> priors;                      // K
    std::vector<std::vector<double>> likelihoods;    // K x D

    static NbOracle fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                        int k, double alpha) {
        const std::size_t d = x.empty() ? 0 : x[0].size();
        NbOracle o;
        o.priors.assign(static_cast<std::size_t>(k), 0.0);
        o.likelihoods.assign(static_cast<std::size_t>(k), std::vector<double>(d, 0.0));
        std::vector<double> totals(static_cast<std::size_t>(k), 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const auto c = static_cast<std::size_t>(y[i]);
            o.priors[c] += 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                o.likelihoods[c][j] += x[i][j];
                totals[c] += x[i][j];
            }
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            o.priors[c] /= static_cast<double>(x.size());
            for (std::size_t j = 0; j < d; ++j) {
                o.likelihoods[c][j] =
                    (o.likelihoods[c][j] + alpha) / (totals[c] + alpha * static_cast<double>(d));
            }
        }
        return o;
    }

    std::vector<double> posterior(const std::vector<double>& doc) const {
        std::vector<double> log_joint(priors.size());
        for (std::size_t c = 0; c < priors.size(); ++c) {
            double lj = std::log(priors[c]);
            for (std::size_t j = 0; j < doc.size(); ++j) {
                lj += doc[j] * std::log(likelihoods[c][j]);
            }
            log_joint[c] = lj;
        }
        const double mx = *std::max_element(log_joint.begin(), log_joint.end());
        double sum = 0.0;
        std::vector<double> post(priors.size());
        for (std::size_t c = 0; c < priors.size(); ++c) {
            post[c] = std::exp(log_joint[c] - mx);
            sum += post[c];
        }
        for (double& p : post) p /= sum;
        return post;
    }
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix; eigenvalues
// descending with matching columns as eigenvectors.
inline void jacobi_eigh(std::vector<std::vector<double>> a, std::vector<double>& eigenvalues,
                        std::vector<std::vector<double>>& eigenvectors) {
    const std::size_t n = a.size();
    eigenvectors.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) eigenvectors[i][i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        }
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = eigenvectors[i][p], viq = eigenvectors[i][q];
                    eigenvectors[i][p] = c * vip - s * viq;
                    eigenvectors[i][q] = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
    eigenvalues.resize(n);
    std::vector<std::vector<double>> sorted_vectors(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        eigenvalues[k] = a[order[k]][order[k]];
        for (std::size_t i = 0; i < n; ++i) sorted_vectors[i][k] = eigenvectors[i][order[k]];
    }
    eigenvectors = std::move(sorted_vectors);
}

// Independent tally of support-weighted precision/recall/f1 from label
// sequences, bypassing the confusion-matrix machinery.
struct BruteMetrics {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

inline BruteMetrics brute_weighted_metrics(const std::vector<std::string>& y_true,
                                           const std::vector<std::string>& y_pred) {
    std::set<std::string> labels(y_true.begin(), y_true.end());
    labels.insert(y_pred.begin(), y_pred.end());
    BruteMetrics out;
    const double n = static_cast<double>(y_true.size());
    for (const auto& label : labels) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < y_true.size(); ++i) {
            const bool t = y_true[i] == label;
            const bool p = y_pred[i] == label;
            if (t && p) ++tp;
            if (!t && p) ++fp;
            if (t && !p) ++fn;
        }
        const double support = static_cast<double>(tp + fn);
        const double prec = (tp + fp) ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        const double rec = (tp + fn) ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        const double f = (prec + rec) > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
        out.precision += support * prec / n;
        out.recall += support * rec / n;
        out.f1 += support * f / n;
    }
    return out;
}

inline std::vector<trxcat::TokenSequence> make_docs(
    const std::vector<std::vector<std::string>>& raw) {
    std::vector<trxcat::TokenSequence> docs;
    for (const auto& tokens : raw) {
        trxcat::TokenSequence seq;
        seq.tokens = tokens;
        docs.push_back(std::move(seq));
    }
    return docs;
}

}  // namespace oracles
