#pragma once

#include <cassert>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "altro/rng.hpp"

namespace altro::nn {

// Dense row-major matrix of doubles. Vectors are 1-column or 1-row mats.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double* row(int r) { return a.data() + static_cast<size_t>(r) * cols; }
    const double* row(int r) const { return a.data() + static_cast<size_t>(r) * cols; }
    double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
    size_t size() const { return a.size(); }
    void zero() { std::fill(a.begin(), a.end(), 0.0); }
};

// One dense layer with persistent gradient buffers; the trainer zeroes
// them between optimizer steps.
struct LinearLayer {
    Mat W;   // out x in
    Mat b;   // 1 x out
    Mat gW;
    Mat gb;

    LinearLayer() = default;
    LinearLayer(int in, int out) : W(out, in), b(1, out), gW(out, in), gb(1, out) {}

    int in_dim() const { return W.cols; }
    int out_dim() const { return W.rows; }

    // Seeded uniform fan-in init: U(-1/sqrt(in), 1/sqrt(in)).
    void init(Rng& rng) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(W.cols));
        for (double& w : W.a) w = rng.uniform(-bound, bound);
        for (double& v : b.a) v = rng.uniform(-bound, bound);
    }

    void zero_grad() {
        gW.zero();
        gb.zero();
    }

    size_t param_count() const { return W.size() + b.size(); }
};

// Reverse-mode tape over matrix ops. Activations live on the tape; layer
// parameters live outside it and collect gradients in their own buffers.
class Tape {
public:
    int input(Mat m) { return push(std::move(m), nullptr); }

    const Mat& val(int id) const { return nodes_[id].val; }
    Mat& grad(int id) { return nodes_[id].grad; }

    // y = x * W^T + b
    int linear(int x, LinearLayer& layer) {
        const Mat& xv = nodes_[x].val;
        assert(xv.cols == layer.in_dim());
        Mat y(xv.rows, layer.out_dim());
        for (int r = 0; r < xv.rows; ++r) {
            const double* xr = xv.row(r);
            double* yr = y.row(r);
            for (int o = 0; o < layer.out_dim(); ++o) {
                const double* wr = layer.W.row(o);
                double acc = layer.b.a[o];
                for (int i = 0; i < layer.in_dim(); ++i) acc += xr[i] * wr[i];
                yr[o] = acc;
            }
        }
        LinearLayer* lp = &layer;
        return push(std::move(y), [x, lp](Tape& t, int self) {
            const Mat& gy = t.nodes_[self].grad;
            const Mat& xv = t.nodes_[x].val;
            Mat& gx = t.nodes_[x].grad;
            for (int r = 0; r < xv.rows; ++r) {
                const double* gyr = gy.row(r);
                const double* xr = xv.row(r);
                double* gxr = gx.row(r);
                for (int o = 0; o < lp->out_dim(); ++o) {
                    const double g = gyr[o];
                    if (g == 0.0) continue;
                    const double* wr = lp->W.row(o);
                    double* gwr = lp->gW.row(o);
                    for (int i = 0; i < lp->in_dim(); ++i) {
                        gxr[i] += g * wr[i];
                        gwr[i] += g * xr[i];
                    }
                    lp->gb.a[o] += g;
                }
            }
        });
    }

    int relu(int x) {
        Mat y = nodes_[x].val;
        for (double& v : y.a)
            if (v < 0.0) v = 0.0;
        return push(std::move(y), [x](Tape& t, int self) {
            const Mat& gy = t.nodes_[self].grad;
            const Mat& xv = t.nodes_[x].val;
            Mat& gx = t.nodes_[x].grad;
            for (size_t i = 0; i < xv.size(); ++i)
                if (xv.a[i] > 0.0) gx.a[i] += gy.a[i];
        });
    }

    // Inverted dropout with a counter-based mask: element (r, c) of the
    // op identified by salt is kept iff u(key, salt, r, c) >= rate.
    int dropout(int x, double rate, uint64_t key, uint64_t salt) {
        const Mat& xv = nodes_[x].val;
        const double scale = 1.0 / (1.0 - rate);
        auto mask = std::make_shared<std::vector<double>>(xv.size(), 0.0);
        Mat y(xv.rows, xv.cols);
        for (int r = 0; r < xv.rows; ++r)
            for (int c = 0; c < xv.cols; ++c) {
                const size_t i = static_cast<size_t>(r) * xv.cols + c;
                if (counter_u01(key, salt, static_cast<uint64_t>(r),
                                static_cast<uint64_t>(c)) >= rate) {
                    (*mask)[i] = scale;
                    y.a[i] = xv.a[i] * scale;
                }
            }
        return push(std::move(y), [x, mask](Tape& t, int self) {
            const Mat& gy = t.nodes_[self].grad;
            Mat& gx = t.nodes_[x].grad;
            for (size_t i = 0; i < gx.size(); ++i) gx.a[i] += gy.a[i] * (*mask)[i];
        });
    }

    int concat_cols(const std::vector<int>& xs) {
        const int rows = nodes_[xs[0]].val.rows;
        int cols = 0;
        for (int id : xs) {
            assert(nodes_[id].val.rows == rows);
            cols += nodes_[id].val.cols;
        }
        Mat y(rows, cols);
        for (int r = 0; r < rows; ++r) {
            double* yr = y.row(r);
            int at = 0;
            for (int id : xs) {
                const Mat& xv = nodes_[id].val;
                const double* xr = xv.row(r);
                for (int c = 0; c < xv.cols; ++c) yr[at++] = xr[c];
            }
        }
        auto parts = std::make_shared<std::vector<int>>(xs);
        return push(std::move(y), [parts](Tape& t, int self) {
            const Mat& gy = t.nodes_[self].grad;
            for (int r = 0; r < gy.rows; ++r) {
                const double* gyr = gy.row(r);
                int at = 0;
                for (int id : *parts) {
                    Mat& gx = t.nodes_[id].grad;
                    double* gxr = gx.row(r);
                    for (int c = 0; c < gx.cols; ++c) gxr[c] += gyr[at++];
                }
            }
        });
    }

    int gather_rows(int x, std::vector<int> rows) {
        const Mat& xv = nodes_[x].val;
        Mat y(static_cast<int>(rows.size()), xv.cols);
        for (size_t r = 0; r < rows.size(); ++r) {
            const double* src = xv.row(rows[r]);
            std::copy(src, src + xv.cols, y.row(static_cast<int>(r)));
        }
        auto idx = std::make_shared<std::vector<int>>(std::move(rows));
        return push(std::move(y), [x, idx](Tape& t, int self) {
            const Mat& gy = t.nodes_[self].grad;
            Mat& gx = t.nodes_[x].grad;
            for (size_t r = 0; r < idx->size(); ++r) {
                const double* gyr = gy.row(static_cast<int>(r));
                double* gxr = gx.row((*idx)[r]);
                for (int c = 0; c < gx.cols; ++c) gxr[c] += gyr[c];
            }
        });
    }

    // Mean of input rows grouped by segment id; empty segments yield zero
    // rows. Callers order rows so equal segments sum in a fixed order.
    int segment_mean(int x, std::vector<int> segment_of_row, int num_segments) {
        const Mat& xv = nodes_[x].val;
        auto counts = std::make_shared<std::vector<int>>(num_segments, 0);
        for (int s : segment_of_row) ++(*counts)[s];
        Mat y(num_segments, xv.cols);
        for (int r = 0; r < xv.rows; ++r) {
            const int s = segment_of_row[r];
            const double* xr = xv.row(r);
            double* yr = y.row(s);
            for (int c = 0; c < xv.cols; ++c) yr[c] += xr[c];
        }
        for (int s = 0; s < num_segments; ++s) {
            if ((*counts)[s] == 0) continue;
            const double inv = 1.0 / (*counts)[s];
            double* yr = y.row(s);
            for (int c = 0; c < xv.cols; ++c) yr[c] *= inv;
        }
        auto seg = std::make_shared<std::vector<int>>(std::move(segment_of_row));
        return push(std::move(y), [x, seg, counts](Tape& t, int self) {
            const Mat& gy = t.nodes_[self].grad;
            Mat& gx = t.nodes_[x].grad;
            for (int r = 0; r < gx.rows; ++r) {
                const int s = (*seg)[r];
                const double inv = 1.0 / (*counts)[s];
                const double* gyr = gy.row(s);
                double* gxr = gx.row(r);
                for (int c = 0; c < gx.cols; ++c) gxr[c] += gyr[c] * inv;
            }
        });
    }

    // Callers seed gradients (loss terms add into grad(...)) before calling.
    void backward() {
        for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i)
            if (nodes_[i].back) nodes_[i].back(*this, i);
    }

private:
    struct Node {
        Mat val;
        Mat grad;
        std::function<void(Tape&, int)> back;
    };

    int push(Mat val, std::function<void(Tape&, int)> back) {
        Node n;
        n.grad = Mat(val.rows, val.cols);
        n.val = std::move(val);
        n.back = std::move(back);
        nodes_.push_back(std::move(n));
        return static_cast<int>(nodes_.size()) - 1;
    }

    std::vector<Node> nodes_;
};

}  // namespace altro::nn
