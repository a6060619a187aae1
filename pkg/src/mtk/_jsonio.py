"""Small helpers for reading the JSON input formats with located errors."""

import json
from pathlib import Path

from .errors import ParseError


def load_json(path):
    """Read and decode a JSON file, mapping syntax errors to `ParseError`."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=path) from exc
    return loads(text, source=path)


def loads(text, source=None):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=source, line=exc.lineno) from exc


class Reader:
    """Typed field access over a decoded document that remembers where it is."""

    def __init__(self, doc, source=None, path="$"):
        self.doc = doc
        self.source = source
        self.path = path

    def fail(self, message, field=None):
        raise ParseError(message, source=self.source, field=field or self.path)

    def child(self, key):
        if isinstance(key, int):
            return Reader(self.doc[key], self.source, f"{self.path}[{key}]")
        return Reader(self.doc[key], self.source, f"{self.path}.{key}")

    def require(self, key):
        if not isinstance(self.doc, dict):
            self.fail("expected an object")
        if key not in self.doc:
            self.fail(f"missing required key {key!r}")
        return self.child(key)

    def optional(self, key):
        if not isinstance(self.doc, dict):
            self.fail("expected an object")
        if key not in self.doc:
            return None
        return self.child(key)

    def as_list(self):
        if not isinstance(self.doc, list):
            self.fail("expected an array")
        return [self.child(i) for i in range(len(self.doc))]

    def as_dict(self):
        if not isinstance(self.doc, dict):
            self.fail("expected an object")
        return {k: self.child(k) for k in self.doc}

    def as_id(self):
        # ids are opaque strings; integers are accepted and stringified
        if isinstance(self.doc, bool) or not isinstance(self.doc, (str, int)):
            self.fail("expected a string id")
        return str(self.doc)

    def as_int(self):
        value = self.doc
        if isinstance(value, bool):
            self.fail("expected an integer")
        if isinstance(value, str):
            try:
                return int(value)
            except ValueError:
                self.fail("expected an integer or a decimal string")
        if not isinstance(value, int):
            self.fail("expected an integer")
        return value
