# Generated by Django 5.2.7 on 2026-10-19 09:12

import uuid
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='AuditRun',
            fields=[
                ('created_at', models.DateTimeField(auto_now_add=True)),
                ('updated_at', models.DateTimeField(auto_now=True)),
                ('run_id', models.UUIDField(default=uuid.uuid4, editable=False, primary_key=True, serialize=False)),
                ('command', models.CharField(choices=[('audit', 'Audit'), ('construct', 'Construct'), ('verify', 'Verify'), ('gen_instance', 'Generate instance')], max_length=20)),
                ('subject', models.CharField(blank=True, db_index=True, max_length=100)),
                ('inputs_digest', models.CharField(blank=True, db_index=True, max_length=71)),
                ('exit_status', models.PositiveSmallIntegerField(default=0)),
                ('report', models.JSONField(default=dict)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
    ]
