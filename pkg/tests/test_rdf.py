"""Turtle parsing, serialization, and the triple-set graph model."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgflow.errors import TurtleSyntaxError, UnknownPrefixError
from kgflow.namespaces import XSD_BOOLEAN, XSD_DOUBLE, XSD_INTEGER, XSD_STRING
from kgflow.rdf import (
    BlankNode,
    Graph,
    Iri,
    Literal,
    Triple,
    TriplePattern,
    parse_turtle,
    serialize_turtle,
)
from kgflow.schema import schema_source
from kgflow.validation import shapes_source

EX = "http://example.org/"

SIMPLE_DOC = """\
@prefix ex: <http://example.org/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .

# a full-line comment
ex:alpha a ex:Thing ;
    ex:count 3 ;
    ex:ratio 0.75 ;
    ex:flag true ;
    ex:name "alpha" ;
    ex:tags ex:one , ex:two .

_:b0 ex:linksTo ex:alpha .
ex:beta ex:score "12"^^xsd:integer .
ex:gamma ex:note "line\\nbreak and \\"quote\\"" .
"""


def test_simple_document_triple_count():
    g = parse_turtle(SIMPLE_DOC)
    assert len(g) == 10


def test_prefixed_and_full_iris_agree():
    g = parse_turtle(SIMPLE_DOC)
    full = parse_turtle(
        '<http://example.org/alpha> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> '
        '<http://example.org/Thing> .'
    )
    assert full.triples <= g.triples


def test_bare_literals_carry_datatypes():
    g = parse_turtle(SIMPLE_DOC)
    alpha = Iri(EX + "alpha")
    assert g.value(alpha, Iri(EX + "count")) == Literal("3", XSD_INTEGER)
    assert g.value(alpha, Iri(EX + "ratio")) == Literal("0.75", XSD_DOUBLE)
    assert g.value(alpha, Iri(EX + "flag")) == Literal("true", XSD_BOOLEAN)
    assert g.value(alpha, Iri(EX + "name")) == Literal("alpha", XSD_STRING)


def test_escapes_round_trip():
    g = parse_turtle(SIMPLE_DOC)
    note = g.value(Iri(EX + "gamma"), Iri(EX + "note"))
    assert note.lexical == 'line\nbreak and "quote"'
    assert parse_turtle(serialize_turtle(g)) == g


def test_object_lists_expand():
    g = parse_turtle(SIMPLE_DOC)
    tags = g.objects(Iri(EX + "alpha"), Iri(EX + "tags"))
    assert tags == [Iri(EX + "one"), Iri(EX + "two")]


@pytest.mark.parametrize("name", ["ds.ttl", "ml.ttl", "stats.ttl", "visu.ttl"])
def test_shipped_schemata_round_trip(name):
    g = parse_turtle(schema_source(name))
    assert parse_turtle(serialize_turtle(g)) == g
    assert len(g) > 0


def test_shapes_document_round_trips():
    g = parse_turtle(shapes_source())
    assert parse_turtle(serialize_turtle(g)) == g


def test_serialization_is_deterministic():
    g = parse_turtle(SIMPLE_DOC)
    assert serialize_turtle(g) == serialize_turtle(g)
    # Insertion order must not leak into the output.
    reversed_graph = Graph(prefixes=g.prefixes)
    for t in reversed(list(g)):
        reversed_graph.insert(t)
    assert serialize_turtle(reversed_graph) == serialize_turtle(g)


def test_longest_prefix_wins_compression():
    g = Graph(prefixes={"a": EX, "ab": EX + "sub/"})
    g.insert(Triple(Iri(EX + "sub/x"), Iri(EX + "p"), Iri(EX + "sub/y")))
    out = serialize_turtle(g)
    assert "ab:x" in out and "a:sub/x" not in out


def test_insert_is_set_semantics():
    g = Graph()
    t = Triple(Iri(EX + "s"), Iri(EX + "p"), Iri(EX + "o"))
    g.insert(t).insert(t)
    assert len(g) == 1
    g.remove(t)
    assert len(g) == 0


def test_match_wildcards_and_order():
    g = parse_turtle(SIMPLE_DOC)
    everything = g.match(TriplePattern())
    assert len(everything) == len(g)
    assert everything == list(g)  # same deterministic order as iteration
    typed = g.match(TriplePattern(predicate=Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type")))
    assert typed == [Triple(Iri(EX + "alpha"), Iri("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"), Iri(EX + "Thing"))]
    by_subject = g.match(TriplePattern(subject=Iri(EX + "beta")))
    assert len(by_subject) == 1


def test_graph_equality_ignores_prefixes():
    g1 = parse_turtle("@prefix ex: <http://example.org/> .\nex:a ex:b ex:c .")
    g2 = parse_turtle("<http://example.org/a> <http://example.org/b> <http://example.org/c> .")
    assert g1 == g2


# -- syntax errors -----------------------------------------------------------


def test_unterminated_statement_positions():
    with pytest.raises(TurtleSyntaxError) as err:
        parse_turtle("@prefix ex: <http://example.org/> .\nex:a ex:b")
    assert err.value.line == 2


def test_unknown_prefix_is_reported():
    with pytest.raises(UnknownPrefixError) as err:
        parse_turtle("nope:a nope:b nope:c .")
    assert "nope" in str(err.value)


def test_unterminated_string():
    with pytest.raises(TurtleSyntaxError):
        parse_turtle('@prefix ex: <http://example.org/> .\nex:a ex:b "open .')


def test_unterminated_iri():
    with pytest.raises(TurtleSyntaxError):
        parse_turtle("<http://example.org/a <http://example.org/b> <http://example.org/c> .")


def test_error_column_is_tracked():
    with pytest.raises(TurtleSyntaxError) as err:
        parse_turtle("@prefix ex: <http://example.org/> .\nex:a ex:b @ .")
    assert err.value.line == 2
    assert err.value.column > 1


# -- randomized round-trips --------------------------------------------------

_local = st.text(alphabet="abcdefgh0123", min_size=1, max_size=6)
_iris = st.builds(lambda s: Iri(EX + s), _local)
_blanks = st.builds(lambda s: BlankNode(f"b{s}"), st.integers(0, 9).map(str))
_plain_text = st.text(
    alphabet=st.characters(exclude_categories=("Cs", "Cc")),
    max_size=12,
) | st.sampled_from(['with "quote"', "back\\slash", "line\nbreak", "tab\there", ""])
_literals = st.one_of(
    st.builds(lambda s: Literal(s, XSD_STRING), _plain_text),
    st.builds(lambda n: Literal(str(n), XSD_INTEGER), st.integers(-10**6, 10**6)),
    st.builds(lambda s: Literal(s, XSD_DOUBLE), st.sampled_from(["0.5", "-3.25", "2e10", "0.1000"])),
    st.builds(lambda b: Literal("true" if b else "false", XSD_BOOLEAN), st.booleans()),
    st.builds(lambda s: Literal(s, EX + "customType"), _local),
)
_subjects = _iris | _blanks
_objects = _iris | _blanks | _literals
_triples = st.builds(Triple, _subjects, _iris, _objects)


@settings(max_examples=120, deadline=None)
@given(st.sets(_triples, max_size=30))
def test_random_graphs_round_trip(triples):
    g = Graph(triples, prefixes={"ex": EX})
    assert parse_turtle(serialize_turtle(g)) == g


@settings(max_examples=60, deadline=None)
@given(st.sets(_triples, max_size=20))
def test_serializer_emits_one_unique_line_per_triple(triples):
    g = Graph(triples, prefixes={"ex": EX})
    body = [line for line in serialize_turtle(g).splitlines() if line and not line.startswith("@prefix")]
    assert len(body) == len(set(body)) == len(g)
    # Line order is the graph's canonical term order, independent of insertion.
    shuffled = Graph(prefixes={"ex": EX})
    for t in reversed(sorted(triples, key=repr)):
        shuffled.insert(t)
    assert serialize_turtle(shuffled) == serialize_turtle(g)
