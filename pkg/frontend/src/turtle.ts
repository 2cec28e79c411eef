// RDF terms, triples, and the canonical Turtle dialect shared with the
// pipeline service: a sorted @prefix block, a blank line, then one triple
// per line sorted by (subject, predicate, object). The serializer here must
// stay byte-compatible with the service's own output so that graphs built on
// the canvas and graphs built through the Python API are interchangeable.

export const RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
export const XSD = "http://www.w3.org/2001/XMLSchema#";
export const DS = "https://kgflow.dev/schema/ds#";
export const ML = "https://kgflow.dev/schema/ml#";
export const STATS = "https://kgflow.dev/schema/stats#";
export const VISU = "https://kgflow.dev/schema/visu#";

export const RDF_TYPE = RDF + "type";
export const XSD_STRING = XSD + "string";
export const XSD_INTEGER = XSD + "integer";
export const XSD_DOUBLE = XSD + "double";
export const XSD_BOOLEAN = XSD + "boolean";

export const STANDARD_PREFIXES: Readonly<Record<string, string>> = {
  rdf: RDF,
  xsd: XSD,
  ds: DS,
  ml: ML,
  stats: STATS,
  visu: VISU,
};

export const PIPELINE_NAMESPACE_ROOT = "https://kgflow.dev/pipeline/";

export function pipelineNamespace(name: string): string {
  return `${PIPELINE_NAMESPACE_ROOT}${name}#`;
}

export function localName(iri: string): string {
  const cut = Math.max(iri.lastIndexOf("#"), iri.lastIndexOf("/"));
  return cut >= 0 ? iri.slice(cut + 1) : iri;
}

export interface IriTerm {
  readonly kind: "iri";
  readonly value: string;
}

export interface LiteralTerm {
  readonly kind: "literal";
  readonly lexical: string;
  readonly datatype: string;
}

export type Term = IriTerm | LiteralTerm;

export function iri(value: string): IriTerm {
  return { kind: "iri", value };
}

export function literal(lexical: string, datatype: string = XSD_STRING): LiteralTerm {
  return { kind: "literal", lexical, datatype };
}

// Subjects and predicates are always IRIs in the graphs the studio handles.
export interface Triple {
  readonly subject: string;
  readonly predicate: string;
  readonly object: Term;
}

export function triple(subject: string, predicate: string, object: Term): Triple {
  return { subject, predicate, object };
}

const PN_PREFIX_RE = /^[A-Za-z][A-Za-z0-9_-]*$/;
const PN_LOCAL_RE = /^[A-Za-z0-9_][A-Za-z0-9_-]*$/;
const INTEGER_RE = /^[+-]?[0-9]+$/;
const DECIMAL_RE = /^[+-]?[0-9]+\.[0-9]+$/;

// -- canonical literal text -------------------------------------------------

// Text of a float exactly as the service writes it: shortest round-tripping
// digits, ".0" appended to integral values, scientific notation only outside
// [1e-4, 1e16) with a sign and at least two exponent digits.
export function pythonFloatText(x: number): string {
  if (Number.isNaN(x)) return "nan";
  if (x === Infinity) return "inf";
  if (x === -Infinity) return "-inf";
  const sign = x < 0 || Object.is(x, -0) ? "-" : "";
  const magnitude = Math.abs(x);
  if (magnitude === 0) return sign + "0.0";
  // toExponential() without an argument already yields the shortest digit
  // string that round-trips, which is the same digit string the service uses.
  const [mantissa, expText] = magnitude.toExponential().split("e");
  const digits = mantissa.replace(".", "");
  const exp = Number(expText);
  if (exp >= -4 && exp < 16) {
    if (exp >= digits.length - 1) {
      return `${sign}${digits.padEnd(exp + 1, "0")}.0`;
    }
    if (exp >= 0) {
      return `${sign}${digits.slice(0, exp + 1)}.${digits.slice(exp + 1)}`;
    }
    return `${sign}0.${"0".repeat(-exp - 1)}${digits}`;
  }
  const head = digits.length > 1 ? `${digits[0]}.${digits.slice(1)}` : digits;
  const expSign = exp < 0 ? "-" : "+";
  const expDigits = String(Math.abs(exp)).padStart(2, "0");
  return `${sign}${head}e${expSign}${expDigits}`;
}

export function formatLiteral(value: unknown, datatype: string): LiteralTerm {
  if (datatype === XSD_INTEGER) return literal(String(value), datatype);
  if (datatype === XSD_DOUBLE) return literal(pythonFloatText(Number(value)), datatype);
  if (datatype === XSD_BOOLEAN) return literal(value ? "true" : "false", datatype);
  return literal(String(value), datatype);
}

// -- serializer -------------------------------------------------------------

function escapeString(s: string): string {
  let out = "";
  for (const ch of s) {
    if (ch === "\\") out += "\\\\";
    else if (ch === '"') out += '\\"';
    else if (ch === "\n") out += "\\n";
    else if (ch === "\r") out += "\\r";
    else if (ch === "\t") out += "\\t";
    else out += ch;
  }
  return out;
}

function compress(target: string, prefixes: Record<string, string>): string | null {
  let best: string | null = null;
  for (const [prefix, ns] of Object.entries(prefixes)) {
    if (target.startsWith(ns) && ns.length > (best !== null ? prefixes[best].length : -1)) {
      const local = target.slice(ns.length);
      if (local && PN_LOCAL_RE.test(local) && PN_PREFIX_RE.test(prefix)) {
        best = prefix;
      }
    }
  }
  if (best === null) return null;
  return `${best}:${target.slice(prefixes[best].length)}`;
}

function renderIri(value: string, prefixes: Record<string, string>): string {
  const short = compress(value, prefixes);
  return short !== null ? short : `<${value}>`;
}

function renderTerm(t: Term, prefixes: Record<string, string>): string {
  if (t.kind === "iri") return renderIri(t.value, prefixes);
  if (t.datatype === XSD_INTEGER && INTEGER_RE.test(t.lexical)) return t.lexical;
  if (t.datatype === XSD_DOUBLE && DECIMAL_RE.test(t.lexical)) return t.lexical;
  if (t.datatype === XSD_BOOLEAN && (t.lexical === "true" || t.lexical === "false")) {
    return t.lexical;
  }
  if (t.datatype === XSD_STRING) return `"${escapeString(t.lexical)}"`;
  return `"${escapeString(t.lexical)}"^^${renderIri(t.datatype, prefixes)}`;
}

type TermKey = readonly [number, string, string];

function termKey(t: Term): TermKey {
  return t.kind === "iri" ? [0, t.value, ""] : [2, t.lexical, t.datatype];
}

function compareKeys(a: TermKey, b: TermKey): number {
  for (let i = 0; i < 3; i++) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

export function compareTriples(a: Triple, b: Triple): number {
  return (
    compareKeys([0, a.subject, ""], [0, b.subject, ""]) ||
    compareKeys([0, a.predicate, ""], [0, b.predicate, ""]) ||
    compareKeys(termKey(a.object), termKey(b.object))
  );
}

function dedupeSorted(triples: readonly Triple[]): Triple[] {
  const seen = new Set<string>();
  const out: Triple[] = [];
  for (const t of [...triples].sort(compareTriples)) {
    const key = JSON.stringify([t.subject, t.predicate, termKey(t.object)]);
    if (!seen.has(key)) {
      seen.add(key);
      out.push(t);
    }
  }
  return out;
}

export function serializeTurtle(
  triples: readonly Triple[],
  prefixes: Record<string, string>,
): string {
  const lines = Object.keys(prefixes)
    .sort()
    .map((p) => `@prefix ${p}: <${prefixes[p]}> .`);
  const body: string[] = [];
  for (const t of dedupeSorted(triples)) {
    const s = renderIri(t.subject, prefixes);
    const p = t.predicate === RDF_TYPE ? "a" : renderIri(t.predicate, prefixes);
    const o = renderTerm(t.object, prefixes);
    body.push(`${s} ${p} ${o} .`);
  }
  if (lines.length && body.length) lines.push("");
  return lines.concat(body).join("\n") + "\n";
}

// -- parser -----------------------------------------------------------------

export class TurtleParseError extends Error {
  readonly line: number;

  constructor(message: string, line: number) {
    super(`line ${line}: ${message}`);
    this.name = "TurtleParseError";
    this.line = line;
  }
}

export interface ParsedTurtle {
  readonly triples: Triple[];
  readonly prefixes: Record<string, string>;
}

const PREFIX_LINE_RE = /^@prefix\s+([A-Za-z][A-Za-z0-9_-]*):\s+<([^<>"\s]*)>\s+\.$/;

class LineScanner {
  private pos = 0;

  constructor(
    private readonly text: string,
    private readonly lineNo: number,
  ) {}

  private fail(message: string): never {
    throw new TurtleParseError(message, this.lineNo);
  }

  skipSpace(): void {
    while (this.pos < this.text.length && (this.text[this.pos] === " " || this.text[this.pos] === "\t")) {
      this.pos++;
    }
  }

  atEnd(): boolean {
    return this.pos >= this.text.length;
  }

  expectDot(): void {
    this.skipSpace();
    if (this.text[this.pos] !== ".") this.fail("expected '.' terminating the triple");
    this.pos++;
    this.skipSpace();
    if (!this.atEnd()) this.fail("unexpected text after '.'");
  }

  private takeIriRef(): string {
    const end = this.text.indexOf(">", this.pos + 1);
    if (end < 0) this.fail("unterminated IRI");
    const value = this.text.slice(this.pos + 1, end);
    this.pos = end + 1;
    return value;
  }

  private takeQuoted(): string {
    let out = "";
    this.pos++;
    while (this.pos < this.text.length) {
      const ch = this.text[this.pos];
      if (ch === '"') {
        this.pos++;
        return out;
      }
      if (ch === "\\") {
        const esc = this.text[this.pos + 1];
        const map: Record<string, string> = {
          "\\": "\\", '"': '"', n: "\n", r: "\r", t: "\t", b: "\b", f: "\f",
        };
        if (!(esc in map)) this.fail(`unknown escape \\${esc ?? ""}`);
        out += map[esc];
        this.pos += 2;
        continue;
      }
      out += ch;
      this.pos++;
    }
    this.fail("unterminated string literal");
  }

  private resolvePrefixed(prefixes: Record<string, string>): string | null {
    const rest = this.text.slice(this.pos);
    const m = /^([A-Za-z][A-Za-z0-9_-]*):([A-Za-z0-9_][A-Za-z0-9_-]*)/.exec(rest);
    if (!m) return null;
    const ns = prefixes[m[1]];
    if (ns === undefined) this.fail(`unknown prefix '${m[1]}:'`);
    this.pos += m[0].length;
    return ns + m[2];
  }

  takeIriTerm(prefixes: Record<string, string>, role: string): string {
    this.skipSpace();
    if (this.atEnd()) this.fail(`missing ${role}`);
    if (this.text[this.pos] === "<") return this.takeIriRef();
    const resolved = this.resolvePrefixed(prefixes);
    if (resolved === null) this.fail(`expected an IRI as ${role}`);
    return resolved;
  }

  takePredicate(prefixes: Record<string, string>): string {
    this.skipSpace();
    const rest = this.text.slice(this.pos);
    if (rest.startsWith("a ") || rest.startsWith("a\t")) {
      this.pos++;
      return RDF_TYPE;
    }
    return this.takeIriTerm(prefixes, "predicate");
  }

  takeObject(prefixes: Record<string, string>): Term {
    this.skipSpace();
    if (this.atEnd()) this.fail("missing object");
    const ch = this.text[this.pos];
    if (ch === "<") return iri(this.takeIriRef());
    if (ch === '"') {
      const lexical = this.takeQuoted();
      if (this.text.startsWith("^^", this.pos)) {
        this.pos += 2;
        return literal(lexical, this.takeIriTerm(prefixes, "datatype"));
      }
      return literal(lexical, XSD_STRING);
    }
    const rest = this.text.slice(this.pos);
    const num = /^[+-]?[0-9]+(\.[0-9]+)?(?=[\s.]|$)/.exec(rest);
    if (num && (rest[num[0].length] !== "." || !/[0-9]/.test(rest[num[0].length + 1] ?? ""))) {
      this.pos += num[0].length;
      return literal(num[0], num[1] ? XSD_DOUBLE : XSD_INTEGER);
    }
    if (/^(true|false)(?=[\s.]|$)/.test(rest)) {
      const word = rest.startsWith("true") ? "true" : "false";
      this.pos += word.length;
      return literal(word, XSD_BOOLEAN);
    }
    const resolved = this.resolvePrefixed(prefixes);
    if (resolved === null) this.fail("cannot read object term");
    return iri(resolved);
  }
}

// Parses the canonical one-triple-per-line dialect (the only form the
// service emits). Blank lines and #-comments are tolerated.
export function parseTurtle(text: string): ParsedTurtle {
  const prefixes: Record<string, string> = {};
  const triples: Triple[] = [];
  const lines = text.split("\n");
  for (let i = 0; i < lines.length; i++) {
    const raw = lines[i].trim();
    if (!raw || raw.startsWith("#")) continue;
    if (raw.startsWith("@prefix")) {
      const m = PREFIX_LINE_RE.exec(raw);
      if (!m) throw new TurtleParseError("malformed @prefix line", i + 1);
      prefixes[m[1]] = m[2];
      continue;
    }
    const scanner = new LineScanner(raw, i + 1);
    const subject = scanner.takeIriTerm(prefixes, "subject");
    const predicate = scanner.takePredicate(prefixes);
    const object = scanner.takeObject(prefixes);
    scanner.expectDot();
    triples.push(triple(subject, predicate, object));
  }
  return { triples, prefixes };
}
