"""Round-trip and schema tests for the JSON document layer."""

import json

import pytest

from blowup import exactla as la
from blowup import serialization as ser
from blowup.binomial import normal_form
from blowup.complexes import complex_from_monoid, star_subdivide_complex
from blowup.manifolds import corner_model, identity_bmap, ordinary_blowup
from blowup.monoids import ToricMonoid
from blowup.serialization import MalformedDocument


def roundtrip(obj):
    doc = ser.to_doc(obj)
    text = ser.dumps(doc)
    return ser.parse_doc(ser.loads(text))


class TestRoundtrip:
    def test_monoid(self):
        m = ToricMonoid.make(2, la.identity(2), [(1, 0), (1, 2)])
        assert roundtrip(m) == m

    def test_monoid_with_sublattice(self):
        m = ToricMonoid.make(2, la.mat([(1, 1)]), [(2, 2)])
        back = roundtrip(m)
        assert back == m
        assert not back.contains((1, 0))

    def test_complex(self):
        q, _ = complex_from_monoid(ToricMonoid.free(2))
        back = roundtrip(q)
        back.validate()
        assert set(back.elements) == set(q.elements)
        assert all(back.monoids[e] == q.monoids[e] for e in q.elements)

    def test_refinement(self):
        q, _ = complex_from_monoid(ToricMonoid.free(2))
        top = max(q.elements, key=lambda a: q.monoids[a].dim)
        r = star_subdivide_complex(q, top, (1, 1))
        back = roundtrip(r)
        back.validate()
        assert set(back.members_over(top)) == set(r.members_over(top))

    def test_manifold(self):
        x = corner_model(3)
        back = roundtrip(x)
        back.validate()
        assert back.faces == x.faces
        assert back.incidence == x.incidence
        assert back.order == x.order

    def test_bmap(self):
        bl, _ = ordinary_blowup(corner_model(2), "H1&H2")
        back = roundtrip(bl.blowdown)
        back.validate()
        assert back == bl.blowdown

    def test_binomial(self):
        b = normal_form([((2, 0), (0, 3))])
        assert roundtrip(b) == b

    def test_canonical_text_stable(self):
        m = ToricMonoid.free(2)
        t1 = ser.dumps(ser.to_doc(m))
        t2 = ser.dumps(ser.to_doc(roundtrip(m)))
        assert t1 == t2


class TestBigNumbers:
    def test_big_int_as_string(self):
        n = 2 ** 80
        assert ser._enc_int(n) == str(n)
        assert ser._dec_int(str(n)) == n
        assert ser._enc_int(7) == 7

    def test_fraction_encoding(self):
        from fractions import Fraction
        assert ser._enc_num(Fraction(1, 3)) == "1/3"
        assert ser._dec_num("1/3") == Fraction(1, 3)

    def test_big_generator_roundtrip(self):
        big = 2 ** 60 + 1
        m = ToricMonoid.make(1, la.mat([(big,)]), [(big,)])
        back = roundtrip(m)
        assert back.contains((big,))
        assert not back.contains((1,))


class TestMalformed:
    def test_bad_json(self):
        with pytest.raises(MalformedDocument):
            ser.loads("{not json")

    def test_unknown_kind(self):
        with pytest.raises(MalformedDocument):
            ser.parse_doc({"kind": "nonsense", "version": 1})

    def test_missing_kind(self):
        with pytest.raises(MalformedDocument):
            ser.parse_doc({"version": 1})

    def test_wrong_version(self):
        doc = ser.to_doc(ToricMonoid.free(1))
        doc["version"] = 999
        with pytest.raises(MalformedDocument):
            ser.parse_doc(doc)

    def test_non_integer_entry(self):
        doc = ser.to_doc(ToricMonoid.free(1))
        doc["generators"] = [["1/2"]]
        with pytest.raises(MalformedDocument):
            ser.parse_doc(doc)

    def test_bool_is_not_a_number(self):
        with pytest.raises(MalformedDocument):
            ser._dec_num(True)
