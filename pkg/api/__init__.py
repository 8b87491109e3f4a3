# HTTP surface for the buildings package
