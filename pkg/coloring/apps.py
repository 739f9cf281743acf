from django.apps import AppConfig


class ColoringConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'coloring'
