/**
 * JSON parser that preserves number tokens verbatim.
 *
 * The backend serializes floats with 17 significant digits so that values
 * round-trip exactly.  Parsing them into JS numbers and re-formatting would
 * re-derive the digits; instead every number keeps its raw source token and
 * the UI renders that token byte-for-byte.  `toNumber` exists only for
 * layout (plot coordinates), never for displayed text.
 */

export type RawJson =
  | { kind: "object"; entries: [string, RawJson][] }
  | { kind: "array"; items: RawJson[] }
  | { kind: "string"; value: string }
  | { kind: "number"; raw: string }
  | { kind: "boolean"; value: boolean }
  | { kind: "null" };

export function parseRaw(text: string): RawJson {
  const p = new Parser(text);
  const value = p.parseValue();
  p.skipWs();
  if (!p.done()) {
    throw new SyntaxError(`trailing characters at offset ${p.pos}`);
  }
  return value;
}

/** Re-emit a tree with every number token verbatim (compact separators). */
export function stringifyRaw(v: RawJson): string {
  switch (v.kind) {
    case "object":
      return (
        "{" +
        v.entries.map(([k, val]) => JSON.stringify(k) + ":" + stringifyRaw(val)).join(",") +
        "}"
      );
    case "array":
      return "[" + v.items.map(stringifyRaw).join(",") + "]";
    case "string":
      return JSON.stringify(v.value);
    case "number":
      return v.raw;
    case "boolean":
      return v.value ? "true" : "false";
    case "null":
      return "null";
  }
}

export function rawNumber(token: string): RawJson {
  if (!NUMBER_RE.test(token)) {
    throw new SyntaxError(`not a JSON number token: ${JSON.stringify(token)}`);
  }
  return { kind: "number", raw: token };
}

export function rawString(value: string): RawJson {
  return { kind: "string", value };
}

export function rawObject(entries: [string, RawJson][]): RawJson {
  return { kind: "object", entries };
}

export function rawArray(items: RawJson[]): RawJson {
  return { kind: "array", items };
}

/** Number from a plain JS value; used for request parameters the UI owns
 * (view rectangle, horizons), never for server-derived quantities. */
export function rawFromNumber(x: number): RawJson {
  if (!Number.isFinite(x)) throw new RangeError(`non-finite number ${x}`);
  return { kind: "number", raw: String(x) };
}

export function get(v: RawJson, key: string): RawJson {
  if (v.kind !== "object") throw new TypeError(`expected object, got ${v.kind}`);
  for (const [k, val] of v.entries) if (k === key) return val;
  throw new RangeError(`missing key ${JSON.stringify(key)}`);
}

export function has(v: RawJson, key: string): boolean {
  return v.kind === "object" && v.entries.some(([k]) => k === key);
}

export function items(v: RawJson): RawJson[] {
  if (v.kind !== "array") throw new TypeError(`expected array, got ${v.kind}`);
  return v.items;
}

export function numToken(v: RawJson): string {
  if (v.kind !== "number") throw new TypeError(`expected number, got ${v.kind}`);
  return v.raw;
}

export function toNumber(v: RawJson): number {
  return Number(numToken(v));
}

export function str(v: RawJson): string {
  if (v.kind !== "string") throw new TypeError(`expected string, got ${v.kind}`);
  return v.value;
}

export function bool(v: RawJson): boolean {
  if (v.kind !== "boolean") throw new TypeError(`expected boolean, got ${v.kind}`);
  return v.value;
}

export function isNull(v: RawJson): boolean {
  return v.kind === "null";
}

const NUMBER_RE = /^-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?$/;
const NUMBER_SCAN = /-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?/y;

class Parser {
  pos = 0;
  constructor(private readonly text: string) {}

  done(): boolean {
    return this.pos >= this.text.length;
  }

  skipWs(): void {
    while (this.pos < this.text.length && " \t\n\r".includes(this.text[this.pos])) {
      this.pos += 1;
    }
  }

  private fail(what: string): never {
    throw new SyntaxError(`${what} at offset ${this.pos}`);
  }

  private literal(word: string): void {
    if (this.text.startsWith(word, this.pos)) {
      this.pos += word.length;
    } else {
      this.fail(`expected ${word}`);
    }
  }

  parseValue(): RawJson {
    this.skipWs();
    if (this.done()) this.fail("unexpected end of input");
    const ch = this.text[this.pos];
    if (ch === "{") return this.parseObject();
    if (ch === "[") return this.parseArray();
    if (ch === '"') return { kind: "string", value: this.parseString() };
    if (ch === "t") {
      this.literal("true");
      return { kind: "boolean", value: true };
    }
    if (ch === "f") {
      this.literal("false");
      return { kind: "boolean", value: false };
    }
    if (ch === "n") {
      this.literal("null");
      return { kind: "null" };
    }
    NUMBER_SCAN.lastIndex = this.pos;
    const m = NUMBER_SCAN.exec(this.text);
    if (m === null) this.fail("invalid value");
    this.pos = NUMBER_SCAN.lastIndex;
    return { kind: "number", raw: m[0] };
  }

  private parseObject(): RawJson {
    this.pos += 1; // {
    const entries: [string, RawJson][] = [];
    this.skipWs();
    if (this.text[this.pos] === "}") {
      this.pos += 1;
      return { kind: "object", entries };
    }
    for (;;) {
      this.skipWs();
      const key = this.parseString();
      this.skipWs();
      if (this.text[this.pos] !== ":") this.fail("expected ':'");
      this.pos += 1;
      entries.push([key, this.parseValue()]);
      this.skipWs();
      const ch = this.text[this.pos];
      if (ch === ",") {
        this.pos += 1;
      } else if (ch === "}") {
        this.pos += 1;
        return { kind: "object", entries };
      } else {
        this.fail("expected ',' or '}'");
      }
    }
  }

  private parseArray(): RawJson {
    this.pos += 1; // [
    const arr: RawJson[] = [];
    this.skipWs();
    if (this.text[this.pos] === "]") {
      this.pos += 1;
      return { kind: "array", items: arr };
    }
    for (;;) {
      arr.push(this.parseValue());
      this.skipWs();
      const ch = this.text[this.pos];
      if (ch === ",") {
        this.pos += 1;
      } else if (ch === "]") {
        this.pos += 1;
        return { kind: "array", items: arr };
      } else {
        this.fail("expected ',' or ']'");
      }
    }
  }

  private parseString(): string {
    if (this.text[this.pos] !== '"') this.fail("expected string");
    // delegate escape handling to the native parser on the raw slice
    let end = this.pos + 1;
    while (end < this.text.length) {
      const ch = this.text[end];
      if (ch === "\\") {
        end += 2;
      } else if (ch === '"') {
        const slice = this.text.slice(this.pos, end + 1);
        this.pos = end + 1;
        return JSON.parse(slice) as string;
      } else {
        end += 1;
      }
    }
    this.fail("unterminated string");
  }
}
