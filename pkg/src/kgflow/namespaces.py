"""Namespace IRIs shared by every module.

The four schema namespaces (data science upper level, machine learning,
statistics, visualization) are fixed; each pipeline additionally mints its own
`exe` namespace derived from the pipeline name.
"""

from __future__ import annotations

RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
XSD = "http://www.w3.org/2001/XMLSchema#"
SH = "http://www.w3.org/ns/shacl#"

DS = "https://kgflow.dev/schema/ds#"
ML = "https://kgflow.dev/schema/ml#"
STATS = "https://kgflow.dev/schema/stats#"
VISU = "https://kgflow.dev/schema/visu#"
KFS = "https://kgflow.dev/schema/shapes#"

PIPELINE_NS_BASE = "https://kgflow.dev/pipeline/"

RDF_TYPE = RDF + "type"
RDFS_SUBCLASSOF = RDFS + "subClassOf"
RDFS_DOMAIN = RDFS + "domain"
RDFS_RANGE = RDFS + "range"
OWL_CLASS = OWL + "Class"
OWL_DATATYPE_PROPERTY = OWL + "DatatypeProperty"
OWL_OBJECT_PROPERTY = OWL + "ObjectProperty"

XSD_STRING = XSD + "string"
XSD_INTEGER = XSD + "integer"
XSD_DOUBLE = XSD + "double"
XSD_BOOLEAN = XSD + "boolean"

# Prefixes every emitted pipeline graph binds, in addition to its own `exe`.
STANDARD_PREFIXES = {
    "rdf": RDF,
    "xsd": XSD,
    "ds": DS,
    "ml": ML,
    "stats": STATS,
    "visu": VISU,
}


def pipeline_namespace(name: str) -> str:
    """Per-pipeline namespace; distinct names never share IRIs."""
    return f"{PIPELINE_NS_BASE}{name}#"


def local_name(iri: str) -> str:
    """The fragment after '#' (or after the last '/' when there is none)."""
    if "#" in iri:
        return iri.rsplit("#", 1)[1]
    return iri.rsplit("/", 1)[-1]


def namespace_of(iri: str) -> str:
    """The part before '#'; empty when the IRI has no fragment separator."""
    if "#" in iri:
        return iri.rsplit("#", 1)[0]
    return ""
