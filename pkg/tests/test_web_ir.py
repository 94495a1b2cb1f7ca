import pytest
from hypothesis import given, settings, strategies as st

from webcalc import rep_engine as re_
from webcalc.linear_algebra import ShapeMismatch, compose, kron
from webcalc.rep_engine import LeviDatum, NegativeLabel
from webcalc.scalar_field import FieldElem, quantum_integer
from webcalc.web_ir import (
    CoilSlice, Gen, HTensor, Id, LocatedTypeError, Scale, SkeinTensor, Sum, UnknownGenerator,
    VCompose, WebSyntaxError, evaluate, flip_leftright, flip_updown, hopf_tensor, parse,
    parse_checked, scaled, skein_tensor, to_text, typecheck,
)

# Parsing and printing -----------------------------------------------------------------

labels = st.integers(min_value=0, max_value=4)
words = st.lists(st.integers(min_value=-3, max_value=3).filter(bool), min_size=1, max_size=3).map(tuple)

leaves = st.one_of(
    st.builds(lambda n, a, b: Gen(n, (a, b)),
              st.sampled_from(["merge", "split", "dmerge", "dsplit", "over", "under"]), labels, labels),
    st.builds(lambda n, a: Gen(n, (a,)), st.sampled_from(["capL", "capR", "cupL", "cupR"]), labels),
    st.builds(Id, words),
    st.builds(CoilSlice, words, st.sampled_from(["winding", "inverse"])),
)


def _extend(children):
    return st.one_of(
        st.builds(HTensor, children, children),
        st.builds(VCompose, children, children),
        st.builds(SkeinTensor, children, children, st.sampled_from(["left", "right"])),
        st.builds(scaled, st.sampled_from(["2", "v^-1", "u1 + 1", "1/(v + 1)"]), children),
        st.builds(Sum, children, children),
    )


terms = st.recursive(leaves, _extend, max_leaves=8)


@settings(max_examples=300, deadline=None)
@given(terms)
def test_print_parse_round_trip(t):
    assert parse(to_text(t)) == t


def test_parse_examples():
    assert parse("split(1,1) ; merge(1,1)") == VCompose(Gen("merge", (1, 1)), Gen("split", (1, 1)))
    assert parse("coil([1,1])") == CoilSlice((1, 1), "winding")
    assert parse("coil_inv([2, -1])") == CoilSlice((2, -1), "inverse")


def test_star_binds_tighter_than_semicolon():
    t = parse("merge(1,1) * id([1]) ; merge(2,1)")
    assert t == VCompose(Gen("merge", (2, 1)), HTensor(Gen("merge", (1, 1)), Id((1,))))


def test_comments_and_whitespace_are_ignored():
    assert parse("# a digon\n split(1,1)\n ;  # then\n merge(1,1)\n") == parse("split(1,1);merge(1,1)")


def test_trailing_comma_is_a_syntax_error():
    with pytest.raises(SyntaxError) as info:
        parse("merge(1,)")
    assert (info.value.lineno, info.value.offset) == (1, 9)


def test_syntax_error_position_on_later_line():
    with pytest.raises(WebSyntaxError) as info:
        parse("merge(1,1)\n; ; split(1,1)")
    assert info.value.lineno == 2


def test_unknown_generator():
    with pytest.raises(UnknownGenerator):
        parse("frobnicate(1,1)")


def test_coil_must_span_a_whole_slice():
    with pytest.raises(WebSyntaxError):
        parse("coil([1]) * id([1])")
    assert isinstance(parse("(coil([1])) * id([1])"), HTensor)


# Typechecking ------------------------------------------------------------------------------

def test_generator_types():
    assert typecheck(parse("merge(1,1)")) == ((1, 1), (2,))
    assert typecheck(parse("capR(2)")) == ((2, -2), ())
    assert typecheck(parse("cupL(2)")) == ((), (2, -2))
    assert typecheck(parse("dsplit(1,2)")) == ((-3,), (-1, -2))
    assert typecheck(parse("over(1,2)")) == ((1, 2), (2, 1))


def test_coil_types():
    assert typecheck(parse("coil([2,-1,1])")) == ((2, -1, 1), (-1, 1, 2))
    assert typecheck(parse("coil_inv([2,-1,1])")) == ((-1, 1, 2), (2, -1, 1))


def test_zero_labels_are_dropped():
    assert typecheck(parse("merge(0,2)")) == ((2,), (2,))


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        typecheck(VCompose(Gen("capR", (1,)), Gen("merge", (1, 1))))
    with pytest.raises(ShapeMismatch):
        typecheck(parse("merge(1,1) + split(1,1)"))


def test_negative_label_is_an_error():
    with pytest.raises(NegativeLabel):
        typecheck(parse("merge(-1,2)"))


def test_located_type_error_points_at_the_composition():
    with pytest.raises(LocatedTypeError) as info:
        parse_checked("merge(1,1)\n  ; capR(1)")
    assert (info.value.lineno, info.value.offset) == (2, 3)


def test_located_error_for_bad_arity():
    with pytest.raises(LocatedTypeError) as info:
        parse_checked("id([1]) * merge(1)")
    assert (info.value.lineno, info.value.offset) == (1, 11)


# Flips ------------------------------------------------------------------------------------

def test_flip_examples():
    assert flip_updown(Gen("merge", (1, 2))) == Gen("split", (1, 2))
    a, b = Gen("merge", (1, 2)), Gen("capL", (1,))
    assert flip_leftright(HTensor(a, b)) == HTensor(flip_leftright(b), flip_leftright(a))


@settings(max_examples=200, deadline=None)
@given(terms)
def test_flips_are_involutions(t):
    assert flip_updown(flip_updown(t)) == t
    assert flip_leftright(flip_leftright(t)) == t


@settings(max_examples=200, deadline=None)
@given(terms)
def test_flips_transform_types(t):
    try:
        dom, cod = typecheck(t)
    except (ShapeMismatch, NegativeLabel):
        return
    assert typecheck(flip_updown(t)) == (cod, dom)
    rev = lambda w: tuple(reversed(w))
    assert typecheck(flip_leftright(t)) == (rev(dom), rev(cod))


# Evaluation --------------------------------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3, 4])
def test_digon_removal(n):
    ctx = LeviDatum(n)
    m = evaluate(parse("split(1,1) ; merge(1,1)"), ctx)
    assert m == quantum_integer(2) * re_.identity((2,), ctx)


def test_closed_loop():
    ctx = LeviDatum(2)
    m = evaluate(parse("cupL(1) ; capR(1)"), ctx)
    assert m.scalar_value() == FieldElem.v(1) + FieldElem.v(-1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_coil_then_inverse_is_identity(n):
    ctx = LeviDatum(n)
    assert evaluate(parse("coil([1]) ; coil_inv([1])"), ctx) == re_.identity((1,), ctx)


def test_evaluation_is_functorial():
    ctx = LeviDatum(3)
    a, b = parse("split(1,1)"), parse("over(1,1)")
    assert evaluate(VCompose(b, a), ctx) == compose(evaluate(b, ctx), evaluate(a, ctx))
    assert evaluate(HTensor(a, b), ctx) == kron(evaluate(a, ctx), evaluate(b, ctx))


@pytest.mark.parametrize("f,g", [("merge(1,1)", "split(1,2)"), ("capR(1)", "cupL(2)"), ("over(1,2)", "merge(2,1)")])
def test_interchange_law(f, g):
    ctx = LeviDatum(3)
    F, G = parse(f), parse(g)
    (df, cf), (dg, cg) = typecheck(F), typecheck(G)
    lhs = VCompose(HTensor(Id(cf), G), HTensor(F, Id(dg)))
    rhs = VCompose(HTensor(F, Id(cg)), HTensor(Id(df), G))
    assert evaluate(lhs, ctx) == evaluate(rhs, ctx)


def test_scalars_and_sums():
    ctx = LeviDatum(2)
    t = parse('scalar "v + 1" * id([1]) + id([1])')
    assert evaluate(t, ctx) == (FieldElem.v(1) + FieldElem.from_int(2)) * re_.identity((1,), ctx)


def test_skein_and_hopf_tensor_differ_with_two_blocks():
    ctx = LeviDatum(2, (1, 1))
    f, g = parse("coil([1])"), parse("id([1])")
    s, h = skein_tensor(f, g), hopf_tensor(f, g)
    assert evaluate(s, ctx) != evaluate(h, ctx)
    assert evaluate(s, ctx, mode="v1") == evaluate(h, ctx, mode="v1")


def test_planar_products_agree():
    ctx = LeviDatum(3)
    f, g = parse("merge(1,1)"), parse("split(1,1) ; over(1,1)")
    assert evaluate(skein_tensor(f, g), ctx) == evaluate(hopf_tensor(f, g), ctx)


def test_specialized_evaluation_matches_exact():
    ctx = LeviDatum(2, (1, 1))
    t = parse("coil([1,-1]) ; capL(1)")
    exact = evaluate(t, ctx)
    spec = evaluate(t, ctx, mode="specialized", point=(3, [5, 7]), p=101)
    assert spec == exact.map_entries(lambda x: FieldElem.from_int(x.specialize(3, [5, 7], 101)))


@pytest.mark.parametrize("f,g", [("coil([1])", "id([1])"), ("coil([1,1])", "merge(1,1)"), ("coil([1,-1])", "split(1,1)")])
def test_back_tensor_is_mirrored_front_tensor(f, g):
    ctx = LeviDatum(3, (1, 2))
    F, G = parse(f), parse(g)
    back = SkeinTensor(F, G, "right")
    mirrored = flip_leftright(SkeinTensor(flip_leftright(G), flip_leftright(F), "left"))
    assert evaluate(back, ctx) == evaluate(mirrored, ctx)
