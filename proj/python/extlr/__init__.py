try:
    from ._extlr import (
        Grammar,
        GrammarError,
        first_k,
        gen_gn,
        parse,
        recognize,
        tokenize,
    )
except ImportError:  # build tree: the module sits next to us, not inside
    from _extlr import (
        Grammar,
        GrammarError,
        first_k,
        gen_gn,
        parse,
        recognize,
        tokenize,
    )

__all__ = [
    "Grammar",
    "GrammarError",
    "first_k",
    "gen_gn",
    "parse",
    "recognize",
    "tokenize",
]
