from django.db import models


class Attribute(models.Model):
    name = models.CharField(max_length=100)
    value = models.CharField(max_length=200)

    def __str__(self):
        return self.name
