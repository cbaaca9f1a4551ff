"""Bundled degeneration catalog (29 cases plus manifest)."""
