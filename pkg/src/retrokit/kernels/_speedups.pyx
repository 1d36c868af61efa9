# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled kernels: hot multiset/count-table maintenance and gate evaluation.

Interface mirrors `retrokit.kernels.pure`; the selection shim in
`retrokit.kernels` picks whichever imports.
"""

from cython.operator cimport dereference as deref
from libcpp.set cimport multiset
from libcpp.unordered_map cimport unordered_map
from libcpp.vector cimport vector

IMPLEMENTATION = "compiled"

OP_IN, OP_CONST, OP_NOT, OP_AND, OP_OR = 0, 1, 2, 3, 4

ctypedef long long i64


cdef class SumMultiset:
    """Multiset of signed integers with minimum retrieval."""

    cdef multiset[i64] _ms

    def add(self, x):
        self._ms.insert(<i64> x)

    def remove(self, x):
        cdef multiset[i64].iterator it = self._ms.find(<i64> x)
        if it == self._ms.end():
            raise KeyError(x)
        self._ms.erase(it)

    def min(self):
        if self._ms.size() == 0:
            return None
        return deref(self._ms.begin())

    def __len__(self):
        return self._ms.size()

    def clone(self):
        cdef SumMultiset other = SumMultiset.__new__(SumMultiset)
        other._ms = self._ms
        return other


cdef inline i64 _lookup(unordered_map[i64, i64]& table, i64 key):
    cdef unordered_map[i64, i64].iterator it = table.find(key)
    if it == table.end():
        return 0
    return deref(it).second


cdef inline void _decrement(unordered_map[i64, i64]& table, i64 key) except *:
    cdef unordered_map[i64, i64].iterator it = table.find(key)
    if it == table.end() or deref(it).second <= 0:
        raise KeyError(key)
    if deref(it).second == 1:
        table.erase(it)
    else:
        # deref(it).second -= 1 would mutate a temporary pair copy
        table[key] = deref(it).second - 1


cdef class TripleTable:
    """Value counts plus pair-sum counts with a running zero-triple counter."""

    cdef unordered_map[i64, i64] _values
    cdef unordered_map[i64, i64] _pairs
    cdef i64 _triples

    @property
    def triples(self):
        return self._triples

    def add_value(self, v):
        cdef i64 vv = <i64> v
        self._triples += _lookup(self._pairs, -vv)
        self._values[vv] += 1

    def remove_value(self, v):
        cdef i64 vv = <i64> v
        _decrement(self._values, vv)
        self._triples -= _lookup(self._pairs, -vv)

    def add_pair(self, s):
        cdef i64 ss = <i64> s
        self._triples += _lookup(self._values, -ss)
        self._pairs[ss] += 1

    def remove_pair(self, s):
        cdef i64 ss = <i64> s
        _decrement(self._pairs, ss)
        self._triples -= _lookup(self._values, -ss)

    def add_pairs(self, b, cs):
        cdef i64 bb = <i64> b
        cdef i64 ss
        for c in cs:
            ss = bb + <i64> c
            self._triples += _lookup(self._values, -ss)
            self._pairs[ss] += 1

    def remove_pairs(self, b, cs):
        cdef i64 bb = <i64> b
        cdef i64 ss
        for c in cs:
            ss = bb + <i64> c
            _decrement(self._pairs, ss)
            self._triples -= _lookup(self._values, -ss)

    def clone(self):
        cdef TripleTable other = TripleTable.__new__(TripleTable)
        other._values = self._values
        other._pairs = self._pairs
        other._triples = self._triples
        return other


def eval_packed(kinds, arg_a, arg_b, bits):
    """Evaluate packed gates (see pure.eval_packed for the contract)."""
    cdef const i64[::1] kv = kinds
    cdef const i64[::1] av = arg_a
    cdef const i64[::1] bv = arg_b
    cdef const unsigned char[::1] sv = bits
    cdef Py_ssize_t n = kv.shape[0]
    cdef vector[char] out = vector[char](n)
    cdef Py_ssize_t i
    cdef i64 k
    for i in range(n):
        k = kv[i]
        if k == 0:
            out[i] = sv[av[i]] - 48
        elif k == 1:
            out[i] = <char> av[i]
        elif k == 2:
            out[i] = 1 - out[av[i]]
        elif k == 3:
            out[i] = out[av[i]] & out[bv[i]]
        else:
            out[i] = out[av[i]] | out[bv[i]]
    return out[n - 1]
