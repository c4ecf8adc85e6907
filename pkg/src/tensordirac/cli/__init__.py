"""Command-line scenario runner."""
