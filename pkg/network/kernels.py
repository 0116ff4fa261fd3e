"""
Compiled propagation kernels.

Every kernel works on the flat arenas described by the layout metadata
table and releases the GIL, so worker threads run them concurrently.
Innermost loops always walk the contiguous pixel (or neuron) dimension
of an aligned map plane.
"""
import numpy as np
from numba import njit

from network.layout import (K_KIND, K_MAPS, K_H, K_W, K_KH, K_KW, K_ACT, K_W_OFF,
                            K_UNITS, K_W_STRIDE, K_FAN_IN, K_Y_OFF, K_MAP_STRIDE,
                            K_NEURONS)

# Layer kinds and activations, mirroring LayerKind / Activation values
INPUT = 0
CONV = 1
MAXPOOL = 2
FULL = 3
OUTPUT = 4

IDENTITY = 0
SIGMOID = 1
SOFTMAX = 2

_TINY = 1e-300


@njit(nogil=True, cache=True)
def _sigmoid(v):
    return 1.0 / (1.0 + np.exp(-v))


@njit(nogil=True, cache=True)
def _zero_layer(meta, l, arena):
    row = meta[l]
    start = row[K_Y_OFF]
    for i in range(start, start + row[K_MAPS] * row[K_MAP_STRIDE]):
        arena[i] = 0


@njit(nogil=True, cache=True)
def _load_input(meta, y, image):
    row = meta[0]
    plane = row[K_H] * row[K_W]
    for m in range(row[K_MAPS]):
        base = row[K_Y_OFF] + m * row[K_MAP_STRIDE]
        for p in range(plane):
            y[base + p] = image[m * plane + p]


@njit(nogil=True, cache=True)
def _forward_conv(meta, l, w, y):
    row = meta[l]
    prev = meta[l - 1]
    ho = row[K_H]
    wo = row[K_W]
    kh = row[K_KH]
    kw = row[K_KW]
    wi = prev[K_W]
    fan = row[K_FAN_IN]
    plane = ho * wo
    for m in range(row[K_MAPS]):
        wb = row[K_W_OFF] + m * row[K_W_STRIDE]
        ob = row[K_Y_OFF] + m * row[K_MAP_STRIDE]
        bias = w[wb + fan]
        for p in range(plane):
            y[ob + p] = bias
        for ci in range(prev[K_MAPS]):
            ib = prev[K_Y_OFF] + ci * prev[K_MAP_STRIDE]
            for a in range(kh):
                for b in range(kw):
                    wv = w[wb + (ci * kh + a) * kw + b]
                    for r in range(ho):
                        src = ib + (r + a) * wi + b
                        dst = ob + r * wo
                        for c in range(wo):
                            y[dst + c] += wv * y[src + c]
        if row[K_ACT] == SIGMOID:
            for p in range(plane):
                y[ob + p] = _sigmoid(y[ob + p])


@njit(nogil=True, cache=True)
def _forward_pool(meta, l, y, argmax):
    row = meta[l]
    prev = meta[l - 1]
    ho = row[K_H]
    wo = row[K_W]
    kh = row[K_KH]
    kw = row[K_KW]
    wi = prev[K_W]
    for m in range(row[K_MAPS]):
        ib = prev[K_Y_OFF] + m * prev[K_MAP_STRIDE]
        ob = row[K_Y_OFF] + m * row[K_MAP_STRIDE]
        for r in range(ho):
            for c in range(wo):
                at = ib + (r * kh) * wi + c * kw
                best = y[at]
                for a in range(kh):
                    for b in range(kw):
                        idx = ib + (r * kh + a) * wi + c * kw + b
                        # strict comparison: the first maximum in scan order wins
                        if y[idx] > best:
                            best = y[idx]
                            at = idx
                y[ob + r * wo + c] = best
                argmax[ob + r * wo + c] = at


@njit(nogil=True, cache=True)
def _forward_full(meta, l, w, y):
    row = meta[l]
    prev = meta[l - 1]
    fan = row[K_FAN_IN]
    plane = prev[K_H] * prev[K_W]
    out = row[K_Y_OFF]
    units = row[K_UNITS]
    for u in range(units):
        wb = row[K_W_OFF] + u * row[K_W_STRIDE]
        s = w[wb + fan]
        j = 0
        for m in range(prev[K_MAPS]):
            ib = prev[K_Y_OFF] + m * prev[K_MAP_STRIDE]
            for p in range(plane):
                s += w[wb + j] * y[ib + p]
                j += 1
        y[out + u] = s

    act = row[K_ACT]
    if act == SIGMOID:
        for u in range(units):
            y[out + u] = _sigmoid(y[out + u])
    elif act == SOFTMAX:
        top = y[out]
        for u in range(1, units):
            if y[out + u] > top:
                top = y[out + u]
        total = 0.0
        for u in range(units):
            e = np.exp(y[out + u] - top)
            y[out + u] = e
            total += e
        for u in range(units):
            y[out + u] = y[out + u] / total


@njit(nogil=True, cache=True)
def forward_pass(meta, w, y, argmax, image):
    """Propagate one flattened image through every layer, filling y and the pooling switches"""
    _load_input(meta, y, image)
    for l in range(1, meta.shape[0]):
        kind = meta[l, K_KIND]
        if kind == CONV:
            _forward_conv(meta, l, w, y)
        elif kind == MAXPOOL:
            _forward_pool(meta, l, y, argmax)
        else:
            _forward_full(meta, l, w, y)


@njit(nogil=True, cache=True)
def cross_entropy_delta(output, label, delta):
    """Cross-entropy loss of a softmax output and its delta w.r.t. the softmax inputs"""
    for u in range(output.shape[0]):
        target = 1.0 if u == label else 0.0
        delta[u] = output[u] - target
    p = np.float64(output[label])
    if p < _TINY:
        p = _TINY
    return -np.log(p)


@njit(nogil=True, cache=True)
def _act_derivative(meta, l, y, delta):
    # turns dL/dy of layer l into dL/dnet
    row = meta[l]
    kind = row[K_KIND]
    if (kind == CONV or kind == FULL) and row[K_ACT] == SIGMOID:
        plane = row[K_H] * row[K_W]
        for m in range(row[K_MAPS]):
            base = row[K_Y_OFF] + m * row[K_MAP_STRIDE]
            for p in range(plane):
                v = y[base + p]
                delta[base + p] *= v * (1.0 - v)


@njit(nogil=True, cache=True)
def _backward_conv(meta, l, w, y, delta, g):
    row = meta[l]
    prev = meta[l - 1]
    ho = row[K_H]
    wo = row[K_W]
    kh = row[K_KH]
    kw = row[K_KW]
    wi = prev[K_W]
    fan = row[K_FAN_IN]
    plane = ho * wo
    for m in range(row[K_MAPS]):
        wb = row[K_W_OFF] + m * row[K_W_STRIDE]
        ob = row[K_Y_OFF] + m * row[K_MAP_STRIDE]
        acc = 0.0
        for p in range(plane):
            acc += delta[ob + p]
        g[wb + fan] += acc
        for ci in range(prev[K_MAPS]):
            ib = prev[K_Y_OFF] + ci * prev[K_MAP_STRIDE]
            for a in range(kh):
                for b in range(kw):
                    acc = 0.0
                    for r in range(ho):
                        src = ib + (r + a) * wi + b
                        dst = ob + r * wo
                        for c in range(wo):
                            acc += delta[dst + c] * y[src + c]
                    g[wb + (ci * kh + a) * kw + b] += acc

    if l - 1 == 0:
        return
    _zero_layer(meta, l - 1, delta)
    for m in range(row[K_MAPS]):
        wb = row[K_W_OFF] + m * row[K_W_STRIDE]
        ob = row[K_Y_OFF] + m * row[K_MAP_STRIDE]
        for ci in range(prev[K_MAPS]):
            ib = prev[K_Y_OFF] + ci * prev[K_MAP_STRIDE]
            for a in range(kh):
                for b in range(kw):
                    wv = w[wb + (ci * kh + a) * kw + b]
                    for r in range(ho):
                        src = ib + (r + a) * wi + b
                        dst = ob + r * wo
                        for c in range(wo):
                            delta[src + c] += wv * delta[dst + c]
    _act_derivative(meta, l - 1, y, delta)


@njit(nogil=True, cache=True)
def _backward_pool(meta, l, y, delta, argmax):
    if l - 1 == 0:
        return
    row = meta[l]
    _zero_layer(meta, l - 1, delta)
    plane = row[K_H] * row[K_W]
    for m in range(row[K_MAPS]):
        ob = row[K_Y_OFF] + m * row[K_MAP_STRIDE]
        for p in range(plane):
            delta[argmax[ob + p]] += delta[ob + p]
    _act_derivative(meta, l - 1, y, delta)


@njit(nogil=True, cache=True)
def _backward_full(meta, l, w, y, delta, g):
    row = meta[l]
    prev = meta[l - 1]
    fan = row[K_FAN_IN]
    plane = prev[K_H] * prev[K_W]
    out = row[K_Y_OFF]
    for u in range(row[K_UNITS]):
        wb = row[K_W_OFF] + u * row[K_W_STRIDE]
        du = delta[out + u]
        g[wb + fan] += du
        j = 0
        for m in range(prev[K_MAPS]):
            ib = prev[K_Y_OFF] + m * prev[K_MAP_STRIDE]
            for p in range(plane):
                g[wb + j] += du * y[ib + p]
                j += 1

    if l - 1 == 0:
        return
    _zero_layer(meta, l - 1, delta)
    for u in range(row[K_UNITS]):
        wb = row[K_W_OFF] + u * row[K_W_STRIDE]
        du = delta[out + u]
        j = 0
        for m in range(prev[K_MAPS]):
            ib = prev[K_Y_OFF] + m * prev[K_MAP_STRIDE]
            for p in range(plane):
                delta[ib + p] += w[wb + j] * du
                j += 1
    _act_derivative(meta, l - 1, y, delta)


@njit(nogil=True, cache=True)
def zero_gradients(meta, g):
    for l in range(meta.shape[0]):
        row = meta[l]
        start = row[K_W_OFF]
        for i in range(start, start + row[K_UNITS] * row[K_W_STRIDE]):
            g[i] = 0


@njit(nogil=True, cache=True)
def publish_layer(meta, l, w, g, eta, lam):
    """
    Apply w <- w - eta * (g + lam * w) to every logical weight of layer l and
    clear the local gradients. Each shared scalar is read and written once,
    without any lock.
    """
    row = meta[l]
    span = row[K_FAN_IN] + 1
    for u in range(row[K_UNITS]):
        wb = row[K_W_OFF] + u * row[K_W_STRIDE]
        for j in range(span):
            idx = wb + j
            wv = w[idx]
            w[idx] = wv - eta * (g[idx] + lam * wv)
            g[idx] = 0


@njit(nogil=True, cache=True)
def backward_pass(meta, w, y, delta, g, argmax, eta, lam, publish):
    """
    Back-propagate the output delta already stored in `delta`.

    Local gradients are cleared first. With `publish` set, each weighted
    layer's gradients are published to the shared weights as soon as that
    layer (including the delta it hands down) is finished.
    """
    zero_gradients(meta, g)
    for l in range(meta.shape[0] - 1, 0, -1):
        kind = meta[l, K_KIND]
        if kind == CONV:
            _backward_conv(meta, l, w, y, delta, g)
        elif kind == MAXPOOL:
            _backward_pool(meta, l, y, delta, argmax)
        else:
            _backward_full(meta, l, w, y, delta, g)
        if publish and kind != MAXPOOL:
            publish_layer(meta, l, w, g, eta, lam)


@njit(nogil=True, cache=True)
def train_sample(meta, w, y, delta, g, argmax, image, label, eta, lam):
    """Forward, loss, backward and per-layer publication for one image; returns the loss"""
    forward_pass(meta, w, y, argmax, image)
    last = meta.shape[0] - 1
    out = meta[last, K_Y_OFF]
    n = meta[last, K_NEURONS]
    loss = cross_entropy_delta(y[out:out + n], label, delta[out:out + n])
    backward_pass(meta, w, y, delta, g, argmax, eta, lam, True)
    return loss


@njit(nogil=True, cache=True)
def classify(meta, w, y, argmax, image):
    """Forward one image and return the index of its largest output (lowest index on ties)"""
    forward_pass(meta, w, y, argmax, image)
    last = meta.shape[0] - 1
    out = meta[last, K_Y_OFF]
    best = 0
    for u in range(1, meta[last, K_NEURONS]):
        if y[out + u] > y[out + best]:
            best = u
    return best
