"""
Transformation for V0.2: Add 'aggregator: sum' to parameters and 'pattern: sequence' to variants when missing.
"""
VERSION_INTRODUCED = "V0.2"

def transform(document: dict) -> dict:
    """Fills in the composition defaults older model files relied on, then updates to current version."""
    for parameter in document.get('parameters') or []:
        parameter.setdefault('aggregator', 'sum')
    for variant in document.get('variants') or []:
        variant.setdefault('pattern', 'sequence')
    from .v0_x_update_version import transform as update_version
    return update_version(document)
