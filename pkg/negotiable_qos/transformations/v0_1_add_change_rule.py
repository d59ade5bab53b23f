"""
Transformation for V0.1: Add 'change_rule: stable' to parameters that do not declare one.
"""
VERSION_INTRODUCED = "V0.1"

def transform(document: dict) -> dict:
    """Defaults every parameter's change rule to stable, then updates to current version."""
    for parameter in document.get('parameters') or []:
        parameter.setdefault('change_rule', 'stable')
    # Always update to latest version at the end
    from .v0_x_update_version import transform as update_version
    return update_version(document)
