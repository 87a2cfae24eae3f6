"""HTTP sidecar exposing embedding, paraphrase, and parsing models behind the
five-endpoint JSON scoring protocol."""

__version__ = "0.1.0"
