# Field sizes

DEFAULT_SIZE_LIMIT = 2**20

# Towers up to this many elements get log/antilog tables on first use.
TABLE_LIMIT = 2**12

# Subfields up to this many elements get their own log/antilog tables.
BASE_TABLE_LIMIT = 256

# Largest field on which property checks run exhaustively instead of sampled.
EXHAUSTIVE_LIMIT = 4096

# Audits

AUDIT_LIMIT = 10**6

# Per (tower, k) block of the default thm21 audit.
THM21_AUDIT_LIMIT = 300

DEFAULT_SEED = 0

# CLI

EXIT_CODES = {
    "ok": 0,
    "not_permutation": 1,
    "disagreement": 2,
    "parse_error": 64,
    "hypothesis": 65,
    "internal": 70,
}

OUTPUT_FORMATS = ("table", "json", "csv")

CONSTRUCTIONS = {
    "thm21": "sum of (L_i(x) + gamma_i) h_i(B(x))",
    "thm31": "x h(lambda_j(x))",
    "thm32": "x h(mu_j(x))",
    "thm41": "L1(x) + L2(gamma) h(f(x))",
    "cor21": "L1(x) + (L2(x) + gamma) h(Tr(x))",
    "cor22": "L(x) + x h(Tr(x))",
    "cor23": "L(x) + gamma h(Tr(x))",
    "cor41": "L(x) + L(gamma) h(f(x))",
}

THM3_VARIANTS = {
    "thm31": "lambda",
    "thm32": "mu",
}

PRESETS = ("example21",)

# Symmetric kinds

SYMMETRIC_KINDS = ("trace", "lambda", "mu")

KIND_ALIASES = {
    "tr": "trace",
    "trace": "trace",
    "lambda": "lambda",
    "mu": "mu",
}

# Linearized polynomial shorthands, resolved against a tower.

LINEARIZED_SHORTHANDS = {
    "zero": "0 (the zero map)",
    "id": "x",
    "tr": "x + x^q + ... + x^(q^(m-1))",
    "frob": "x^q",
    "frob-id": "x^q - x",
}

CSV_HEADER = ("input_code", "output_code")
